//! The group ring `Z[H]` of Laurent monomials over `Z^{2g}`, truncation
//! modulo the cube of the augmentation ideal, the looped-clasper torsion
//! polynomials, and extraction of the leading monomial `t` and the
//! quadratic part `α` from a torsion value.

use crate::multilinear::Sym2;
use crate::symplectic::HClass;
use crate::{qi, Q};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

/// Element of `Z[H]`: exponent vector -> coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentElem(pub BTreeMap<Vec<i64>, i64>);

impl LaurentElem {
    pub fn zero() -> Self {
        LaurentElem(BTreeMap::new())
    }

    pub fn one(g: usize) -> Self {
        Self::monomial(&HClass::zero(g), 1)
    }

    pub fn monomial(h: &HClass, c: i64) -> Self {
        let mut out = LaurentElem::zero();
        out.term(h.0.clone(), c);
        out
    }

    pub fn term(&mut self, exp: Vec<i64>, c: i64) {
        if c == 0 {
            return;
        }
        match self.0.entry(exp) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &LaurentElem) -> LaurentElem {
        let mut out = self.clone();
        for (k, &c) in &other.0 {
            out.term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentElem) -> LaurentElem {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, s: i64) -> LaurentElem {
        if s == 0 {
            return LaurentElem::zero();
        }
        LaurentElem(self.0.iter().map(|(k, &c)| (k.clone(), c * s)).collect())
    }

    pub fn mul(&self, other: &LaurentElem) -> LaurentElem {
        let mut out = LaurentElem::zero();
        for (a, &ca) in &self.0 {
            for (b, &cb) in &other.0 {
                out.term(a.iter().zip(b).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Class in `Z[H]/I³` (rational coefficients): constant, linear part in the
/// generators `x_i = e_i − 1`, and quadratic part in `S²H`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncElem {
    pub n: Q,
    pub v: Vec<Q>,
    pub q: Sym2,
}

impl TruncElem {
    pub fn zero(g: usize) -> Self {
        TruncElem { n: Q::zero(), v: vec![Q::zero(); 2 * g], q: Sym2::new() }
    }

    pub fn add(&self, other: &TruncElem) -> TruncElem {
        TruncElem {
            n: self.n + other.n,
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
            q: self.q.add(&other.q),
        }
    }

    pub fn scale(&self, s: Q) -> TruncElem {
        TruncElem {
            n: self.n * s,
            v: self.v.iter().map(|a| a * s).collect(),
            q: self.q.scale(s),
        }
    }

    pub fn mul(&self, other: &TruncElem) -> TruncElem {
        let n = self.n * other.n;
        let v: Vec<Q> = self
            .v
            .iter()
            .zip(&other.v)
            .map(|(a, b)| self.n * b + other.n * a)
            .collect();
        let mut q = self.q.scale(other.n).add(&other.q.scale(self.n));
        for (i, a) in self.v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.v.iter().enumerate() {
                let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                q.term((lo, hi), a * b);
            }
        }
        TruncElem { n, v, q }
    }

    pub fn is_zero(&self) -> bool {
        self.n.is_zero() && self.v.iter().all(|a| a.is_zero()) && self.q.is_zero()
    }
}

/// Truncate mod `I³`: the monomial of `h = Σ c_i e_i` expands as
/// `∏ (1 + x_i)^{c_i}` with `(1+x)^c ≡ 1 + c·x + C(c,2)·x²`, which is also
/// valid for negative exponents.
pub fn truncate(x: &LaurentElem, g: usize) -> TruncElem {
    let mut out = TruncElem::zero(g);
    for (exp, &co) in &x.0 {
        let mut m = TruncElem::zero(g);
        m.n = qi(1);
        for (i, &c) in exp.iter().enumerate() {
            m.v[i] = qi(c);
        }
        for i in 0..2 * g {
            let ci = exp[i];
            m.q.term((i, i), qi(ci * (ci - 1) / 2));
            for j in i + 1..2 * g {
                m.q.term((i, j), qi(ci * exp[j]));
            }
        }
        out = out.add(&m.scale(qi(co)));
    }
    out
}

/// `P_{d,ε}(Y, X₁..X_d) = Y + (−1)^{ε+1} ∏ (1 − Xᵢ)` with `Y` the monomial
/// of `b` and `Xᵢ` the monomials of `hs[i]`.
pub fn p_de(eps: u8, b: &HClass, hs: &[HClass]) -> LaurentElem {
    let g = b.genus();
    let sign = if eps % 2 == 0 { -1 } else { 1 };
    let mut prod = LaurentElem::one(g);
    for h in hs {
        prod = prod.mul(&LaurentElem::one(g).sub(&LaurentElem::monomial(h, 1)));
    }
    LaurentElem::monomial(b, 1).add(&prod.scale(sign))
}

/// Looped-clasper surgery datum: loop degree, framing parity, base class,
/// and the leaf classes entering the polynomial.
#[derive(Clone, Debug)]
pub struct LoopedGen {
    pub eps: u8,
    pub b: HClass,
    pub hs: Vec<HClass>,
}

/// Torsion of a product of looped-clasper surgeries on the trivial
/// cylinder: the product over generators of
/// `P(b⁻¹, h₁..h_d) · P(b, h₁⁻¹..h_d⁻¹)`.
pub fn torsion_of_looped_product(gens: &[LoopedGen], g: usize) -> LaurentElem {
    let mut out = LaurentElem::one(g);
    for gen in gens {
        let hs_inv: Vec<HClass> = gen.hs.iter().map(|h| h.neg()).collect();
        let f1 = p_de(gen.eps, &gen.b.neg(), &gen.hs);
        let f2 = p_de(gen.eps, &gen.b, &hs_inv);
        out = out.mul(&f1).mul(&f2);
    }
    out
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum TorsionError {
    #[error("torsion constant term is not 1")]
    NonUnitConstant,
    #[error("torsion linear part is not integral, so t is not in 2H")]
    NonIntegralLinear,
}

/// Split a torsion value as `t^{1/2} + higher`: `t` is twice the linear
/// part (which must be integral), `α` the quadratic remainder after the
/// square root monomial is removed.
pub fn extract_t_alpha(x: &LaurentElem, g: usize) -> Result<(HClass, Sym2), TorsionError> {
    let t = truncate(x, g);
    if t.n != qi(1) {
        return Err(TorsionError::NonUnitConstant);
    }
    if !t.v.iter().all(|c| c.is_integer()) {
        return Err(TorsionError::NonIntegralLinear);
    }
    let half: HClass = HClass(t.v.iter().map(|c| c.to_integer()).collect());
    let root = truncate(&LaurentElem::monomial(&half, 1), g);
    let alpha = t.q.sub(&root.q);
    Ok((half.scale(2), alpha))
}
