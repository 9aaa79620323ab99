//! Free Lie and quasi-Lie rings on `H` up to degree 4, the bracket-kernel
//! modules `D_k(H)` and their quasi-Lie analogue in degree 2, the embedding
//! of `Λ³H` into `D_1(H)`, and the map `η′` from the symmetric square of
//! `Λ²H` (modulo `Λ⁴H`) onto the degree-2 quasi-Lie bracket kernel.
//!
//! The free Lie ring uses a Hall basis with generators ordered by coordinate
//! slot. The quasi-Lie ring is presented by left-normed bracket generators
//! modulo the antisymmetry and Jacobi relator lattice; bases and ranks come
//! from Hermite/Smith normal forms of that lattice.

use crate::matrix::{hnf, left_kernel, snf, Hnf, Mat};
use crate::multilinear::{sympair_basis, PairKey, SymPair, W3, W4};
use crate::symplectic::HClass;
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Basis element handle: (degree, index within that degree).
pub type BIdx = (usize, usize);

pub struct FreeLieCache {
    pub g: usize,
    /// Number of degree-`d` Hall basis elements, `d = 1..=4`.
    pub dims: [usize; 4],
    /// For degree >= 2: `children[d-2][i]` is the `(left, right)` pair.
    children: Vec<Vec<(BIdx, BIdx)>>,
    index: HashMap<(BIdx, BIdx), usize>,
    memo: Mutex<HashMap<(BIdx, BIdx), Arc<Vec<(usize, i128)>>>>,
}

static FREE_LIE: Lazy<Mutex<HashMap<usize, Arc<FreeLieCache>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn free_lie(g: usize) -> Arc<FreeLieCache> {
    let mut map = FREE_LIE.lock().unwrap();
    map.entry(g)
        .or_insert_with(|| {
            let r = 2 * g;
            let mut dims = [r, 0, 0, 0];
            let mut children: Vec<Vec<(BIdx, BIdx)>> = vec![Vec::new(); 3];
            let mut index = HashMap::new();
            for n in 2..=4usize {
                let mut elems = Vec::new();
                for dv in 1..n {
                    let du = n - dv;
                    let nu = if du == 1 { r } else { children[du - 2].len() };
                    let nv = if dv == 1 { r } else { children[dv - 2].len() };
                    for iu in 0..nu {
                        for iv in 0..nv {
                            let u = (du, iu);
                            let v = (dv, iv);
                            if u >= v {
                                continue;
                            }
                            // Hall condition: if v = [x, y] then x <= u
                            if dv >= 2 {
                                let (x, _) = children[dv - 2][iv];
                                if x > u {
                                    continue;
                                }
                            }
                            index.insert((u, v), elems.len());
                            elems.push((u, v));
                        }
                    }
                }
                dims[n - 1] = elems.len();
                children[n - 2] = elems;
            }
            Arc::new(FreeLieCache { g, dims, children, index, memo: Mutex::new(HashMap::new()) })
        })
        .clone()
}

impl FreeLieCache {
    /// Bracket of two basis elements as a combination in degree `du + dv`.
    pub fn bracket_basis(&self, u: BIdx, v: BIdx) -> Arc<Vec<(usize, i128)>> {
        let n = u.0 + v.0;
        assert!(n <= 4, "bracket exceeds degree 4");
        if let Some(r) = self.memo.lock().unwrap().get(&(u, v)) {
            return r.clone();
        }
        let result = if u == v {
            Vec::new()
        } else if u > v {
            self.bracket_basis(v, u).iter().map(|&(i, c)| (i, -c)).collect()
        } else if let Some(&i) = self.index.get(&(u, v)) {
            vec![(i, 1)]
        } else {
            // v = [x, y] with x > u: [u,[x,y]] = [[u,x],y] + [x,[u,y]]
            let (x, y) = self.children[v.0 - 2][v.1];
            let mut acc: BTreeMap<usize, i128> = BTreeMap::new();
            for &(i, c) in self.bracket_basis(u, x).iter() {
                for &(j, d) in self.bracket_basis((u.0 + x.0, i), y).iter() {
                    *acc.entry(j).or_insert(0) += c * d;
                }
            }
            for &(i, c) in self.bracket_basis(u, y).iter() {
                for &(j, d) in self.bracket_basis(x, (u.0 + y.0, i)).iter() {
                    *acc.entry(j).or_insert(0) += c * d;
                }
            }
            acc.into_iter().filter(|&(_, c)| c != 0).collect()
        };
        let result = Arc::new(result);
        self.memo.lock().unwrap().insert((u, v), result.clone());
        result
    }
}

/// Homogeneous element of the free Lie ring in Hall-basis coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lie {
    pub deg: usize,
    pub c: BTreeMap<usize, i128>,
}

impl Lie {
    pub fn zero(deg: usize) -> Self {
        Lie { deg, c: BTreeMap::new() }
    }

    pub fn gen(slot: usize) -> Self {
        Lie { deg: 1, c: BTreeMap::from([(slot, 1)]) }
    }

    pub fn from_hclass(x: &HClass) -> Self {
        let c = x.0.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v as i128));
        Lie { deg: 1, c: c.collect() }
    }

    pub fn term(&mut self, i: usize, v: i128) {
        if v == 0 {
            return;
        }
        let e = self.c.entry(i).or_insert(0);
        *e += v;
        if *e == 0 {
            self.c.remove(&i);
        }
    }

    pub fn add(&self, other: &Lie) -> Lie {
        assert_eq!(self.deg, other.deg);
        let mut out = self.clone();
        for (&i, &v) in &other.c {
            out.term(i, v);
        }
        out
    }

    pub fn scale(&self, s: i128) -> Lie {
        if s == 0 {
            return Lie::zero(self.deg);
        }
        Lie { deg: self.deg, c: self.c.iter().map(|(&i, &v)| (i, v * s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

pub fn bracket(x: &Lie, y: &Lie, cache: &FreeLieCache) -> Lie {
    let mut out = Lie::zero(x.deg + y.deg);
    for (&i, &a) in &x.c {
        for (&j, &b) in &y.c {
            for &(k, c) in cache.bracket_basis((x.deg, i), (y.deg, j)).iter() {
                out.term(k, a * b * c);
            }
        }
    }
    out
}

/// Rank of the degree-`n` part of the free Lie ring on `r` generators.
pub fn lie_rank(r: usize, n: usize) -> usize {
    match n {
        1 => r,
        2 => r * (r - 1) / 2,
        3 => (r.pow(3) - r) / 3,
        4 => (r.pow(4) - r.pow(2)) / 4,
        _ => unreachable!(),
    }
}

/// Element of `H ⊗ 𝔏_n(H)`, keyed by `(coordinate slot, Hall basis index)`.
pub type HTLie = BTreeMap<(usize, usize), i128>;

fn htlie_term(m: &mut HTLie, k: (usize, usize), v: i128) {
    if v == 0 {
        return;
    }
    let e = m.entry(k).or_insert(0);
    *e += v;
    if *e == 0 {
        m.remove(&k);
    }
}

/// `a∧b∧c -> a⊗[b,c] + c⊗[a,b] + b⊗[c,a]`, extended linearly.
/// Input coefficients must be integers.
pub fn d1_embed(t: &W3, g: usize) -> HTLie {
    let cache = free_lie(g);
    let mut out = HTLie::new();
    for (&[a, b, c], &co) in &t.0 {
        assert!(co.is_integer());
        let co = *co.numer() as i128;
        for (h, l, r) in [(a, b, c), (c, a, b), (b, c, a)] {
            for &(i, v) in cache.bracket_basis((1, l), (1, r)).iter() {
                htlie_term(&mut out, (h, i), co * v);
            }
        }
    }
    out
}

/// Membership in `D_k(H) = Ker(H ⊗ 𝔏_{k+1} -> 𝔏_{k+2})`, `k = deg - 1`.
pub fn dk_membership(e: &HTLie, deg: usize, g: usize) -> bool {
    let cache = free_lie(g);
    let mut acc: BTreeMap<usize, i128> = BTreeMap::new();
    for (&(h, i), &co) in e {
        for &(j, v) in cache.bracket_basis((1, h), (deg, i)).iter() {
            *acc.entry(j).or_insert(0) += co * v;
        }
    }
    acc.values().all(|&v| v == 0)
}

/// Presentation data of the quasi-Lie ring in degrees 3 and 4: left-normed
/// generators `[[a,b],c]` (resp. `[[[a,b],c],d]`) with `a <= b`, modulo the
/// antisymmetry and Jacobi relator lattices.
pub struct QuasiCache {
    pub g: usize,
    pub l3_gens: Vec<(usize, usize, usize)>,
    pub l3_index: HashMap<(usize, usize, usize), usize>,
    pub l4_gens: Vec<(usize, usize, usize, usize)>,
    pub l4_index: HashMap<(usize, usize, usize, usize), usize>,
    pub r3: Mat,
    pub r4_hnf: Hnf,
    pub r4: Mat,
}

static QUASI: Lazy<Mutex<HashMap<usize, Arc<QuasiCache>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn quasi(g: usize) -> Arc<QuasiCache> {
    let mut map = QUASI.lock().unwrap();
    map.entry(g)
        .or_insert_with(|| {
            let r = 2 * g;
            let mut l3_gens = Vec::new();
            for a in 0..r {
                for b in a..r {
                    for c in 0..r {
                        l3_gens.push((a, b, c));
                    }
                }
            }
            let l3_index: HashMap<_, _> =
                l3_gens.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            let mut l4_gens = Vec::new();
            for a in 0..r {
                for b in a..r {
                    for c in 0..r {
                        for d in 0..r {
                            l4_gens.push((a, b, c, d));
                        }
                    }
                }
            }
            let l4_index: HashMap<_, _> =
                l4_gens.iter().enumerate().map(|(i, &k)| (k, i)).collect();

            let canon3 = |a: usize, b: usize, c: usize| -> (usize, i128) {
                if a <= b {
                    (l3_index[&(a, b, c)], 1)
                } else {
                    (l3_index[&(b, a, c)], -1)
                }
            };
            let mut r3_rows = Vec::new();
            for a in 0..r {
                for c in 0..r {
                    let mut row = vec![0i128; l3_gens.len()];
                    row[l3_index[&(a, a, c)]] = 2;
                    r3_rows.push(row);
                }
            }
            for a in 0..r {
                for b in 0..r {
                    for c in 0..r {
                        let mut row = vec![0i128; l3_gens.len()];
                        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                            let (i, s) = canon3(x, y, z);
                            row[i] += s;
                        }
                        r3_rows.push(row);
                    }
                }
            }
            let r3 = Mat::from_rows(r3_rows);

            let canon4 = |a: usize, b: usize, c: usize, d: usize| -> (usize, i128) {
                if a <= b {
                    (l4_index[&(a, b, c, d)], 1)
                } else {
                    (l4_index[&(b, a, c, d)], -1)
                }
            };
            let mut r4_rows = Vec::new();
            for a in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        let mut row = vec![0i128; l4_gens.len()];
                        row[l4_index[&(a, a, c, d)]] = 2;
                        r4_rows.push(row);
                    }
                }
            }
            for a in 0..r {
                for b in 0..r {
                    for c in 0..r {
                        for d in 0..r {
                            let mut row = vec![0i128; l4_gens.len()];
                            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                                let (i, s) = canon4(x, y, z, d);
                                row[i] += s;
                            }
                            r4_rows.push(row);
                        }
                    }
                }
            }
            // antisymmetry of [[a,b],[c,d]] expressed through left-normed trees
            for a in 0..r {
                for b in a..r {
                    for c in 0..r {
                        for d in c..r {
                            let mut row = vec![0i128; l4_gens.len()];
                            row[l4_index[&(a, b, c, d)]] += 1;
                            row[l4_index[&(a, b, d, c)]] -= 1;
                            row[l4_index[&(c, d, a, b)]] += 1;
                            row[l4_index[&(c, d, b, a)]] -= 1;
                            r4_rows.push(row);
                        }
                    }
                }
            }
            let r4 = Mat::from_rows(r4_rows);
            let r4_hnf = hnf(&r4, false);
            Arc::new(QuasiCache { g, l3_gens, l3_index, l4_gens, l4_index, r3, r4_hnf, r4 })
        })
        .clone()
}

impl QuasiCache {
    pub fn n3(&self) -> usize {
        2 * self.g * self.l3_gens.len()
    }

    fn slot3(&self, h: usize, key: (usize, usize, usize)) -> usize {
        h * self.l3_gens.len() + self.l3_index[&key]
    }

    /// The relator lattice of `H ⊗ 𝔏′₃` (one shifted copy of the degree-3
    /// relators per coordinate slot of `H`), as matrix rows.
    pub fn hr3_rows(&self) -> Vec<Vec<i128>> {
        let n3 = self.n3();
        let g3 = self.l3_gens.len();
        let mut rows = Vec::new();
        for h in 0..2 * self.g {
            for i in 0..self.r3.r {
                let mut row = vec![0i128; n3];
                for j in 0..g3 {
                    row[h * g3 + j] = self.r3[(i, j)];
                }
                rows.push(row);
            }
        }
        rows
    }

    /// Bracket `H ⊗ 𝔏′₃ -> 𝔏′₄`: `h ⊗ [[a,b],c] -> -[[[a,b],c],h]`.
    pub fn bracket3(&self, v: &[i128]) -> Vec<i128> {
        let g3 = self.l3_gens.len();
        let mut out = vec![0i128; self.l4_gens.len()];
        for (k, &co) in v.iter().enumerate() {
            if co == 0 {
                continue;
            }
            let h = k / g3;
            let (a, b, c) = self.l3_gens[k % g3];
            out[self.l4_index[&(a, b, c, h)]] -= co;
        }
        out
    }

    /// Membership in the degree-2 quasi-Lie bracket kernel (the bracket
    /// image must lie in the degree-4 relator lattice).
    pub fn d2p_membership(&self, v: &[i128]) -> bool {
        self.r4_hnf.contains(&self.bracket3(v))
    }
}

/// `η′` on the symmetric square of `Λ²H`, in `H ⊗ 𝔏′₃` coordinates:
/// `(a∧b)·(c∧d) -> a⊗[b,[c,d]] + b⊗[[c,d],a] + c⊗[d,[a,b]] + d⊗[[a,b],c]`,
/// applied to the diagonal tensor `P⊗P` as the square `P·P` (so the
/// diagonal image carries a factor 2). With the halved diagonal the image
/// bracket would be the 2-torsion quasi-Lie class `[[a,b],[a,b]]`, which is
/// nonzero; the squared convention is the one that lands in the kernel.
pub fn eta_prime(x: &SymPair, q: &QuasiCache) -> Vec<i128> {
    let mut out = vec![0i128; q.n3()];
    for (&(p, pq), &co) in &x.0 {
        assert!(co.is_integer());
        let co = *co.numer() as i128;
        let (a, b) = p;
        let (c, d) = pq;
        if p == pq {
            out[q.slot3(a, (a, b, b))] -= 2 * co;
            out[q.slot3(b, (a, b, a))] += 2 * co;
        } else {
            out[q.slot3(a, (c, d, b))] -= co;
            out[q.slot3(b, (c, d, a))] += co;
            out[q.slot3(c, (a, b, d))] -= co;
            out[q.slot3(d, (a, b, c))] += co;
        }
    }
    out
}

pub fn eta_prime_basis_rows(q: &QuasiCache) -> (Vec<PairKey>, Vec<Vec<i128>>) {
    let basis = sympair_basis(q.g);
    let rows = basis
        .iter()
        .map(|&k| {
            let mut s = SymPair::new();
            s.term(k, crate::qi(1));
            eta_prime(&s, q)
        })
        .collect();
    (basis, rows)
}

/// Generators of the full bracket-kernel preimage
/// `{ v in H⊗𝔏′₃-coordinates : bracket(v) lies in the degree-4 relator lattice }`.
pub fn d2p_kernel_gens(q: &QuasiCache) -> Vec<Vec<i128>> {
    let n3 = q.n3();
    let g4 = q.l4_gens.len();
    // coordinates after the column transform of the relator SNF: membership in
    // the relator lattice becomes per-column congruences
    let s = snf(&q.r4, false, true);
    let divisors = s.divisors();
    let v = s.v.unwrap();
    let rank = divisors.len();
    // columns that actually constrain: nontrivial congruence or exact zero
    let mut cons: Vec<(usize, i128)> = Vec::new();
    for (i, &d) in divisors.iter().enumerate() {
        if d > 1 {
            cons.push((i, d));
        }
    }
    for i in rank..g4 {
        cons.push((i, 0));
    }
    // rows: each unit vector's bracket image in transformed coordinates,
    // restricted to the constraint columns
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(n3 + cons.len());
    for k in 0..n3 {
        let mut unit = vec![0i128; n3];
        unit[k] = 1;
        let b = q.bracket3(&unit);
        let row: Vec<i128> = cons
            .iter()
            .map(|&(j, _)| (0..g4).map(|i| b[i] * v[(i, j)]).sum())
            .collect();
        rows.push(row);
    }
    // helper rows absorbing the congruence moduli
    for (t, &(_, m)) in cons.iter().enumerate() {
        if m != 0 {
            let mut row = vec![0i128; cons.len()];
            row[t] = m;
            rows.push(row);
        }
    }
    let ker = left_kernel(&Mat::from_rows(rows));
    ker.into_iter().map(|kv| kv[..n3].to_vec()).collect()
}

/// Certification of the degree-2 quasi-Lie picture at genus `g`:
/// `η′` is well defined on the `Λ⁴H` quotient, lands in the bracket kernel,
/// and is bijective onto it; the natural map to the free-Lie bracket kernel
/// is injective with cokernel of exponent 2 and mod-2 dimension `C(2g,2)`.
pub struct QuasiReport {
    pub eta_vanishes_on_lambda4: bool,
    pub eta_in_kernel: bool,
    pub eta_injective: bool,
    pub eta_surjective: bool,
    pub levine_ok: bool,
    pub rank: usize,
}

pub fn certify_quasi(g: usize) -> QuasiReport {
    let q = quasi(g);
    let fl = free_lie(g);
    let hr3 = q.hr3_rows();
    let hr3_hnf = hnf(&Mat::from_rows(hr3.clone()), false);

    // well-definedness: the image of every Λ⁴H basis element is a relator
    let mut eta_vanishes_on_lambda4 = true;
    for k in crate::multilinear::w4_basis(g) {
        let mut w = W4::new();
        w.term(k, crate::qi(1));
        let e = crate::multilinear::embed_lambda4(&w);
        if !hr3_hnf.contains(&eta_prime(&e, &q)) {
            eta_vanishes_on_lambda4 = false;
        }
    }

    let (_, eta_rows) = eta_prime_basis_rows(&q);
    let eta_in_kernel = eta_rows.iter().all(|r| q.d2p_membership(r));

    let mut stacked = eta_rows.clone();
    stacked.extend(hr3.clone());
    let eta_span = hnf(&Mat::from_rows(stacked), false);
    // η′ factors through the quotient by Λ⁴H, which is free of this rank
    let n = eta_rows.len() - crate::multilinear::w4_basis(g).len();
    let eta_injective = eta_span.rank() == hr3_hnf.rank() + n;

    let kgens = d2p_kernel_gens(&q);
    let mut kstack = kgens;
    kstack.extend(hr3);
    let kernel_span = hnf(&Mat::from_rows(kstack), false);
    let eta_surjective = eta_span.rank() == kernel_span.rank()
        && (0..kernel_span.rank()).all(|i| eta_span.contains(kernel_span.h.row(i)))
        && (0..eta_span.rank()).all(|i| kernel_span.contains(eta_span.h.row(i)));

    // free-Lie side: kernel of the bracket H ⊗ 𝔏₃ -> 𝔏₄
    let d3 = fl.dims[2];
    let d4 = fl.dims[3];
    let mut m2 = Mat::zeros(2 * g * d3, d4);
    for h in 0..2 * g {
        for i in 0..d3 {
            for &(j, c) in fl.bracket_basis((1, h), (3, i)).iter() {
                m2[(h * d3 + i, j)] = c;
            }
        }
    }
    let k2 = left_kernel(&m2);
    let k2_hnf = hnf(&Mat::from_rows(k2), false);
    let rank2 = k2_hnf.rank();

    // project η′ images to the free Lie ring and express in the kernel basis
    let g3 = q.l3_gens.len();
    let mut levine_ok = true;
    let mut crows = Vec::new();
    for row in &eta_rows {
        let mut img = vec![0i128; 2 * g * d3];
        for (k, &co) in row.iter().enumerate() {
            if co == 0 {
                continue;
            }
            let h = k / g3;
            let (a, b, c) = q.l3_gens[k % g3];
            let ab = fl.bracket_basis((1, a), (1, b));
            for &(i, v) in ab.iter() {
                for &(j, w) in fl.bracket_basis((2, i), (1, c)).iter() {
                    img[h * d3 + j] += co * v * w;
                }
            }
        }
        match k2_hnf.express(&img) {
            Some(y) => crows.push(y[..].to_vec()),
            None => {
                levine_ok = false;
                crows.push(vec![0; k2_hnf.h.r]);
            }
        }
    }
    let cs = snf(&Mat::from_rows(crows), false, false);
    let div = cs.divisors();
    let expect_two = 2 * g * (2 * g - 1) / 2;
    if div.len() != n
        || n != rank2
        || div.iter().filter(|&&d| d == 2).count() != expect_two
        || !div.iter().all(|&d| d == 1 || d == 2)
    {
        levine_ok = false;
    }

    QuasiReport {
        eta_vanishes_on_lambda4,
        eta_in_kernel,
        eta_injective,
        eta_surjective,
        levine_ok,
        rank: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::{wedge3, wedge4, embed_lambda4};
    use crate::qi;
    use rand::{Rng, SeedableRng};

    fn a(g: usize, i: usize) -> HClass {
        HClass::alpha(g, i)
    }
    fn b(g: usize, i: usize) -> HClass {
        HClass::beta(g, i)
    }
    fn rand_h(g: usize, rng: &mut impl Rng) -> HClass {
        HClass((0..2 * g).map(|_| rng.gen_range(-2i64..=2)).collect())
    }

    #[test]
    fn hall_dims() {
        for g in 1..=3usize {
            let fl = free_lie(g);
            for n in 1..=4 {
                assert_eq!(fl.dims[n - 1], lie_rank(2 * g, n), "g={g} n={n}");
            }
        }
    }

    #[test]
    fn bracket_basics() {
        let g = 2;
        let fl = free_lie(g);
        let x = Lie::from_hclass(&a(g, 1));
        assert!(bracket(&x, &x, &fl).is_zero());
        let y = Lie::from_hclass(&b(g, 1));
        let xy = bracket(&x, &y, &fl);
        assert_eq!(xy.c.len(), 1);
        assert_eq!(*xy.c.values().next().unwrap(), 1);
        assert_eq!(bracket(&y, &x, &fl), xy.scale(-1));
    }

    #[test]
    fn jacobi_random() {
        let g = 2;
        let fl = free_lie(g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = Lie::from_hclass(&rand_h(g, &mut rng));
            let y = Lie::from_hclass(&rand_h(g, &mut rng));
            let zc = Lie::from_hclass(&rand_h(g, &mut rng));
            let z = bracket(&zc, &Lie::from_hclass(&rand_h(g, &mut rng)), &fl);
            let j = bracket(&x, &bracket(&y, &z, &fl), &fl)
                .add(&bracket(&z, &bracket(&x, &y, &fl), &fl))
                .add(&bracket(&y, &bracket(&z, &x, &fl), &fl));
            assert!(j.is_zero());
        }
    }

    #[test]
    fn d1_embed_examples() {
        let g = 2;
        let fl = free_lie(g);
        // a1∧b1∧a2 -> a1⊗[b1,a2] + a2⊗[a1,b1] + b1⊗[a2,a1]
        let t = wedge3(&a(g, 1), &b(g, 1), &a(g, 2));
        let e = d1_embed(&t, g);
        let mut expect = HTLie::new();
        for (h, l, r) in [(0usize, 2usize, 1usize), (1, 0, 2), (2, 1, 0)] {
            for &(i, v) in fl.bracket_basis((1, l), (1, r)).iter() {
                htlie_term(&mut expect, (h, i), v);
            }
        }
        assert_eq!(e, expect);
        assert!(dk_membership(&e, 2, g));
        // non-member
        let mut bad = HTLie::new();
        bad.insert((0, 0), 1);
        assert!(!dk_membership(&bad, 2, g));
        assert!(dk_membership(&HTLie::new(), 2, g));
    }

    #[test]
    fn d1_random_membership_and_rank() {
        let g = 2;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let t = wedge3(&rand_h(g, &mut rng), &rand_h(g, &mut rng), &rand_h(g, &mut rng));
            assert!(dk_membership(&d1_embed(&t, g), 2, g));
        }
        // rank of the embedding at g = 2 is C(4,3) = 4
        let fl = free_lie(g);
        let d2 = fl.dims[1];
        let mut rows = Vec::new();
        for i in 0..2 * g {
            for j in i + 1..2 * g {
                for k in j + 1..2 * g {
                    let mut t = W3::new();
                    t.term([i, j, k], qi(1));
                    let e = d1_embed(&t, g);
                    let mut row = vec![0i128; 2 * g * d2];
                    for (&(h, l), &v) in &e {
                        row[h * d2 + l] = v;
                    }
                    rows.push(row);
                }
            }
        }
        let s = snf(&Mat::from_rows(rows), false, false);
        assert_eq!(s.rank(), 4);
        assert!(s.divisors().iter().all(|&d| d == 1));
    }

    #[test]
    fn quasi_ranks() {
        for g in 1..=2usize {
            let q = quasi(g);
            let r = 2 * g;
            let s3 = snf(&q.r3, false, false);
            assert_eq!(q.l3_gens.len() - s3.rank(), lie_rank(r, 3));
            let s4 = snf(&q.r4, false, false);
            assert_eq!(q.l4_gens.len() - s4.rank(), lie_rank(r, 4));
        }
    }

    #[test]
    fn eta_prime_diagonal_display() {
        // (a1∧b1)·(a1∧b1) -> 2a1⊗[b1,[a1,b1]] + 2b1⊗[[a1,b1],a1]
        let g = 1;
        let q = quasi(g);
        let mut s = SymPair::new();
        s.term(((0, 1), (0, 1)), qi(1));
        let v = eta_prime(&s, &q);
        let mut expect = vec![0i128; q.n3()];
        expect[q.slot3(0, (0, 1, 1))] = -2;
        expect[q.slot3(1, (0, 1, 0))] = 2;
        assert_eq!(v, expect);
        assert!(q.d2p_membership(&v));
    }

    #[test]
    fn eta_prime_random_membership() {
        let g = 2;
        let q = quasi(g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let hr3 = hnf(&Mat::from_rows(q.hr3_rows()), false);
        for _ in 0..20 {
            let w = wedge4(
                &rand_h(g, &mut rng),
                &rand_h(g, &mut rng),
                &rand_h(g, &mut rng),
                &rand_h(g, &mut rng),
            );
            let e = embed_lambda4(&w);
            assert!(hr3.contains(&eta_prime(&e, &q)));
        }
        for _ in 0..20 {
            let x = crate::multilinear::wedge2(&rand_h(g, &mut rng), &rand_h(g, &mut rng));
            let y = crate::multilinear::wedge2(&rand_h(g, &mut rng), &rand_h(g, &mut rng));
            assert!(q.d2p_membership(&eta_prime(&crate::multilinear::sym_arrow(&x, &y), &q)));
        }
    }

    #[test]
    fn certify_small_genus() {
        for g in 1..=2usize {
            let rep = certify_quasi(g);
            assert!(rep.eta_vanishes_on_lambda4, "g={g}");
            assert!(rep.eta_in_kernel, "g={g}");
            assert!(rep.eta_injective, "g={g}");
            assert!(rep.eta_surjective, "g={g}");
            assert!(rep.levine_ok, "g={g}");
            let m = 2 * g * (2 * g - 1) / 2;
            let lam4 = crate::multilinear::w4_basis(g).len();
            assert_eq!(rep.rank, m * (m + 1) / 2 - lam4, "g={g}");
        }
    }
}

