//! Spin structures as quadratic forms over `Z_2`, the space of squarefree
//! boolean polynomials of degree <= 3 in the basis evaluations, discrete
//! derivatives, and the identification of the degree-`n` graded piece with
//! `Λⁿ H ⊗ Z_2`.

use crate::symplectic::HClass;
use once_cell::sync::Lazy;
use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

/// Quadratic form with polar form the mod-2 intersection pairing, stored by
/// its values on the `2g` basis classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpinForm(pub Vec<u8>);

/// Squarefree polynomial over `Z_2` in the variables `x_i = q(basis_i)`,
/// kept as the set of monomials present (the empty monomial is the
/// constant 1).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BoolPoly(pub BTreeSet<Vec<usize>>);

fn omega2(g: usize, i: usize, j: usize) -> u8 {
    (i + g == j || j + g == i) as u8
}

impl BoolPoly {
    pub fn zero() -> Self {
        BoolPoly(BTreeSet::new())
    }

    pub fn one() -> Self {
        BoolPoly(BTreeSet::from([Vec::new()]))
    }

    pub fn var(i: usize) -> Self {
        BoolPoly(BTreeSet::from([vec![i]]))
    }

    /// Toggle a monomial (addition of one term over `Z_2`).
    pub fn toggle(&mut self, m: Vec<usize>) {
        debug_assert!(m.windows(2).all(|w| w[0] < w[1]));
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add(&self, other: &BoolPoly) -> BoolPoly {
        let mut out = self.clone();
        for m in &other.0 {
            out.toggle(m.clone());
        }
        out
    }

    pub fn mul(&self, other: &BoolPoly) -> BoolPoly {
        let mut out = BoolPoly::zero();
        for a in &self.0 {
            for b in &other.0 {
                let m: BTreeSet<usize> = a.iter().chain(b).copied().collect();
                out.toggle(m.into_iter().collect());
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The degree-`n` monomials, read as a subset of the `Λⁿ` basis.
    pub fn top_wedge(&self, n: usize) -> BTreeSet<Vec<usize>> {
        self.0.iter().filter(|m| m.len() == n).cloned().collect()
    }
}

/// `h -> overline{h}`: the polynomial `q ↦ q(h)`, expanded through
/// `q(x+y) = q(x) + q(y) + ω(x,y)`. Linear part is the mod-2 coordinate
/// vector; the constant collects the pairwise intersection corrections.
pub fn affine_bar(h: &HClass) -> BoolPoly {
    let g = h.genus();
    let mut out = BoolPoly::zero();
    let mut constant = 0i64;
    for i in 0..2 * g {
        if h.0[i].rem_euclid(2) == 1 {
            out.toggle(vec![i]);
        }
        for j in i + 1..2 * g {
            constant += h.0[i] * h.0[j] * omega2(g, i, j) as i64;
        }
    }
    if constant.rem_euclid(2) == 1 {
        out.toggle(Vec::new());
    }
    out
}

pub fn evaluate(f: &BoolPoly, q: &SpinForm) -> u8 {
    let mut acc = 0u8;
    for m in &f.0 {
        acc ^= m.iter().fold(1u8, |p, &i| p & q.0[i]);
    }
    acc
}

/// Shift a form by `y` in `H ⊗ Z_2`: `(σ + y)(x) = σ(x) + ω(y, x)`.
pub fn shift(q: &SpinForm, y: &[u8]) -> SpinForm {
    let g = q.0.len() / 2;
    SpinForm(
        (0..2 * g)
            .map(|i| q.0[i] ^ (0..2 * g).fold(0u8, |a, j| a ^ (y[j] & omega2(g, j, i))))
            .collect(),
    )
}

/// `n`-th discrete derivative at `σ` on arguments `ys`:
/// `Σ_{P ⊆ {1..n}} (−1)^{|P|} f(σ + Σ_{i∈P} y_i)` (a sign-free sum mod 2).
pub fn derivative_eval(f: &BoolPoly, ys: &[Vec<u8>], q: &SpinForm) -> u8 {
    let n = ys.len();
    let g = q.0.len() / 2;
    let mut acc = 0u8;
    for p in 0..(1u32 << n) {
        let mut y = vec![0u8; 2 * g];
        for (i, yi) in ys.iter().enumerate() {
            if p >> i & 1 == 1 {
                for (a, b) in y.iter_mut().zip(yi) {
                    *a ^= b;
                }
            }
        }
        acc ^= evaluate(f, &shift(q, &y));
    }
    acc
}

fn unit(g: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0u8; 2 * g];
    v[i] = 1;
    v
}

/// Table of the `n`-th derivative on strictly increasing basis tuples:
/// the set of tuples where the derivative is 1.
pub fn derivative_n(f: &BoolPoly, n: usize, q: &SpinForm) -> BTreeSet<Vec<usize>> {
    assert!(n <= 3);
    let g = q.0.len() / 2;
    let mut out = BTreeSet::new();
    let mut tuple = Vec::new();
    fn rec(
        f: &BoolPoly,
        q: &SpinForm,
        g: usize,
        n: usize,
        start: usize,
        tuple: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if tuple.len() == n {
            let ys: Vec<Vec<u8>> = tuple.iter().map(|&i| unit(g, i)).collect();
            if derivative_eval(f, &ys, q) == 1 {
                out.insert(tuple.clone());
            }
            return;
        }
        for i in start..2 * g {
            tuple.push(i);
            rec(f, q, g, n, i + 1, tuple, out);
            tuple.pop();
        }
    }
    rec(f, q, g, n, 0, &mut tuple, &mut out);
    out
}

/// Dense GF(2) row-reduction inverse; rows as bit masks.
fn gf2_inverse(rows: &[u64], n: usize) -> Option<Vec<u64>> {
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        let p = (col..n).find(|&i| a[i] >> col & 1 == 1)?;
        a.swap(col, p);
        inv.swap(col, p);
        for i in 0..n {
            if i != col && a[i] >> col & 1 == 1 {
                a[i] ^= a[col];
                inv[i] ^= inv[col];
            }
        }
    }
    Some(inv)
}

fn tuples(g: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t = Vec::new();
    fn rec(g: usize, n: usize, start: usize, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if t.len() == n {
            out.push(t.clone());
            return;
        }
        for i in start..2 * g {
            t.push(i);
            rec(g, n, i + 1, t, out);
            t.pop();
        }
    }
    rec(g, n, 0, &mut t, &mut out);
    out
}

/// Permanent mod 2 of the pairing matrix `ω(e_s, e_t)` between two tuples.
fn perm2(g: usize, s: &[usize], t: &[usize]) -> u8 {
    // permanent = determinant over Z_2; tuples are tiny, expand directly
    fn rec(g: usize, s: &[usize], t: &[usize], used: &mut Vec<bool>, row: usize) -> u8 {
        if row == s.len() {
            return 1;
        }
        let mut acc = 0u8;
        for (j, &tj) in t.iter().enumerate() {
            if !used[j] && omega2(g, s[row], tj) == 1 {
                used[j] = true;
                acc ^= rec(g, s, t, used, row + 1);
                used[j] = false;
            }
        }
        acc
    }
    rec(g, s, t, &mut vec![false; t.len()], 0)
}

static WEDGE_ID: Lazy<Mutex<HashMap<(usize, usize), Vec<u64>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Identify a derivative table with an element of `ΛⁿH ⊗ Z_2`: the table of
/// `dⁿ` on basis tuples is the pairing-permanent transform of the top-degree
/// monomials, so the identification inverts that transform.
pub fn table_to_wedge(table: &BTreeSet<Vec<usize>>, n: usize, g: usize) -> BTreeSet<Vec<usize>> {
    let ts = tuples(g, n);
    let idx: HashMap<&Vec<usize>, usize> = ts.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let inv = WEDGE_ID
        .lock()
        .unwrap()
        .entry((g, n))
        .or_insert_with(|| {
            assert!(ts.len() <= 64);
            let rows: Vec<u64> = ts
                .iter()
                .map(|s| {
                    ts.iter()
                        .enumerate()
                        .fold(0u64, |m, (j, t)| m | (perm2(g, s, t) as u64) << j)
                })
                .collect();
            gf2_inverse(&rows, ts.len()).expect("pairing transform is invertible")
        })
        .clone();
    let mut v = 0u64;
    for s in table {
        v ^= inv[idx[s]];
    }
    (0..ts.len()).filter(|&j| v >> j & 1 == 1).map(|j| ts[j].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_forms(g: usize) -> Vec<SpinForm> {
        (0..1u32 << (2 * g))
            .map(|m| SpinForm((0..2 * g).map(|i| (m >> i & 1) as u8).collect()))
            .collect()
    }

    #[test]
    fn affine_bar_examples() {
        let g = 1;
        assert_eq!(affine_bar(&HClass::alpha(g, 1)), BoolPoly::var(0));
        let h = HClass::alpha(g, 1).add(&HClass::beta(g, 1));
        let mut expect = BoolPoly::var(0).add(&BoolPoly::var(1));
        expect.toggle(Vec::new());
        assert_eq!(affine_bar(&h), expect);
        assert!(affine_bar(&h.scale(2)).is_zero());
        // additivity up to the ω correction, exhaustively at g = 1
        for a in -2i64..=2 {
            for b in -2..=2 {
                for c in -2..=2 {
                    for d in -2..=2 {
                        let x = HClass(vec![a, b]);
                        let y = HClass(vec![c, d]);
                        let lhs = affine_bar(&x.add(&y));
                        let mut rhs = affine_bar(&x).add(&affine_bar(&y));
                        if crate::symplectic::omega(&x, &y).rem_euclid(2) == 1 {
                            rhs.toggle(Vec::new());
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let g = 1;
        let q = SpinForm(vec![1, 0]);
        assert_eq!(evaluate(&BoolPoly::one(), &q), 1);
        assert_eq!(evaluate(&affine_bar(&HClass::alpha(g, 1)), &q), 1);
        let prod = affine_bar(&HClass::alpha(g, 1)).mul(&affine_bar(&HClass::beta(g, 1)));
        for q in all_forms(g) {
            assert_eq!(evaluate(&prod, &q), q.0[0] & q.0[1]);
        }
    }

    #[test]
    fn derivative_examples() {
        let g = 2;
        let q = SpinForm(vec![0; 4]);
        assert!(derivative_n(&BoolPoly::one(), 1, &q).is_empty());
        // d³(ā₁ b̄₁ ā₂) identifies with α₁∧β₁∧α₂ mod 2 (slots {0,1,2})
        let f = affine_bar(&HClass::alpha(g, 1))
            .mul(&affine_bar(&HClass::beta(g, 1)))
            .mul(&affine_bar(&HClass::alpha(g, 2)));
        for q in [SpinForm(vec![0; 4]), SpinForm(vec![1, 0, 1, 1])] {
            let t = derivative_n(&f, 3, &q);
            assert_eq!(table_to_wedge(&t, 3, g), BTreeSet::from([vec![0, 1, 2]]));
            assert_eq!(f.top_wedge(3), BTreeSet::from([vec![0, 1, 2]]));
        }
    }

    #[test]
    fn derivative_sigma_independent_and_vanishing() {
        let g = 1;
        // a representative spread of degree <= 2 polynomials
        let polys = [
            BoolPoly::one(),
            BoolPoly::var(0),
            BoolPoly::var(0).mul(&BoolPoly::var(1)),
            BoolPoly::var(0).mul(&BoolPoly::var(1)).add(&BoolPoly::var(1)).add(&BoolPoly::one()),
        ];
        for f in &polys {
            let tables: BTreeSet<_> =
                all_forms(g).iter().map(|q| derivative_n(f, 2, q)).collect();
            assert_eq!(tables.len(), 1, "d² must be σ-independent for deg ≤ 2");
            // d^{n+1} of degree <= n vanishes at every σ and argument choice
            for q in all_forms(g) {
                let n = f.degree();
                let args: Vec<Vec<Vec<u8>>> = (0..1u32 << (2 * g * (n + 1)))
                    .map(|m| {
                        (0..n + 1)
                            .map(|k| {
                                (0..2 * g)
                                    .map(|i| (m >> (k * 2 * g + i) & 1) as u8)
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                for ys in args {
                    assert_eq!(derivative_eval(f, &ys, &q), 0);
                }
            }
        }
    }

    #[test]
    fn derivative_repeated_arguments_vanish() {
        let g = 1;
        let f = BoolPoly::var(0)
            .mul(&BoolPoly::var(1))
            .add(&BoolPoly::var(0))
            .add(&BoolPoly::one());
        let q = SpinForm(vec![1, 1]);
        for i in 0..2 {
            for j in 0..2 {
                let ys = vec![unit(g, i), unit(g, i), unit(g, j)];
                assert_eq!(derivative_eval(&f, &ys, &q), 0);
            }
        }
    }
}
