//! Clasper-presentation data model and evaluation of the invariants on it:
//! the degree-1 and degree-2 tree reductions τ₁ and τ₂, the boolean
//! polynomial β, the torsion quadratic part α, the degree-2 diagram value
//! Z₂, and the integer core `d = 2d′ + 48d″` with the associated Casson
//! value λ.
//!
//! Surgery formulas per generator kind:
//! - a Y generator with one special leaf and normal leaves `K,L` changes Z₂
//!   by `½H(k,l|k,l) + ½(Lk² + Lk − Fr(K)Fr(L))Θ + ½Fr(L)Φ(k,k)
//!   + ½Fr(K)Φ(l,l) − (½+Lk)Φ(k,l)`;
//! - an H generator with leaves `L₁..L₄` changes Z₂ by `H(l₁,l₂|l₃,l₄)
//!   + Lk₁₃Φ(l₂,l₄) + Lk₂₄Φ(l₁,l₃) − Lk₁₄Φ(l₂,l₃) − Lk₂₃Φ(l₁,l₄)
//!   + (Lk₁₄Lk₂₃ − Lk₁₃Lk₂₄)Θ`;
//! - the looped Φ generator on classes `(h,h′)` has Z₂ = Φ(h,h′) + ½⟨h,h′⟩Θ
//!   and the Θ generator has Z₂ = Θ;
//! - the twist along a genus-`h` bounding curve has
//!   τ₂ = ½ΣᵢH(αᵢ,βᵢ|αᵢ,βᵢ) + Σ_{i<j}H(αᵢ,βᵢ|αⱼ,βⱼ) and d″ = −h/8.
//!
//! Linking data follows the signed-linking conventions: `Lk₋(L,K) −
//! Lk₊(L,K) = ω([L],[K])`, `Lk₋(L,K) = Lk₊(K,L)`, `Lk = (Lk₊+Lk₋)/2`.

use crate::diagrams::{d_bar_prime, h_theta, phi_theta, DiagElem};
use crate::multilinear::{sym2, sym_arrow, tensor_square, wedge2, wedge3, Sym2, SymPair, W3};
use crate::spin::{affine_bar, BoolPoly};
use crate::symplectic::{omega, pairing, HClass};
use crate::{q, qi, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Leaf {
    pub class: HClass,
    pub framing: i64,
    #[serde(default)]
    pub special: bool,
}

impl Leaf {
    pub fn normal(class: HClass, framing: i64) -> Self {
        Leaf { class, framing, special: false }
    }

    pub fn special(g: usize) -> Self {
        Leaf { class: HClass::zero(g), framing: -1, special: true }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GenKind {
    Ygraph,
    H2graph,
    Phi2graph,
    Theta2graph,
    Bscc(usize),
}

/// One surgery generator: a graph clasper (leaves ordered as pictured) or
/// a twist along a bounding simple closed curve of the stated genus.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClasperGen {
    pub kind: GenKind,
    #[serde(default)]
    pub leaves: Vec<Leaf>,
    /// Lk₊ over pairs of leaf indices; missing pairs default to 0
    #[serde(default, with = "lk_serde")]
    pub lkplus: BTreeMap<(usize, usize), i64>,
}

/// JSON form of the Lk₊ table: object with "i,j" keys.
mod lk_serde {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<(usize, usize), i64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let conv: BTreeMap<String, i64> =
            m.iter().map(|(&(i, j), &v)| (format!("{i},{j}"), v)).collect();
        conv.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(usize, usize), i64>, D::Error> {
        let conv = BTreeMap::<String, i64>::deserialize(d)?;
        conv.into_iter()
            .map(|(k, v)| {
                let (i, j) =
                    k.split_once(',').ok_or_else(|| D::Error::custom("expected \"i,j\" key"))?;
                Ok((
                    (
                        i.trim().parse().map_err(D::Error::custom)?,
                        j.trim().parse().map_err(D::Error::custom)?,
                    ),
                    v,
                ))
            })
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Presentation {
    pub genus: usize,
    pub generators: Vec<ClasperGen>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum InvError {
    /// leaf count does not match the generator kind
    LeafCount { kind: GenKind, got: usize },
    /// special leaf carrying a nonzero class or framing ≠ −1
    BadSpecialLeaf { gen: usize },
    /// redundant Lk₊ entries violating the signed-linking relations
    InconsistentLk { gen: usize, pair: (usize, usize) },
    /// bounding-curve genus exceeds the surface genus
    BsccGenus { gen: usize, h: usize },
    /// β is undefined on bounding-curve generators
    BetaOnBscc { gen: usize },
    /// Z₂-dependent invariants need a surgery formula for every generator;
    /// a Y generator without special leaf has none
    UnsupportedForZ2 { gen: usize },
    /// degree-2 data is only defined when the degree-1 part vanishes
    Tau1Nonzero,
    /// the two evaluation routes for d disagree (convention bug)
    Internal(String),
}

fn expected_leaves(kind: GenKind) -> usize {
    match kind {
        GenKind::Ygraph => 3,
        GenKind::H2graph => 4,
        GenKind::Phi2graph => 2,
        GenKind::Theta2graph | GenKind::Bscc(_) => 0,
    }
}

fn validate_gen(idx: usize, gen: &ClasperGen, g: usize) -> Result<(), InvError> {
    if gen.leaves.len() != expected_leaves(gen.kind) {
        return Err(InvError::LeafCount { kind: gen.kind, got: gen.leaves.len() });
    }
    for leaf in &gen.leaves {
        if leaf.special && (!leaf.class.is_zero() || leaf.framing != -1) {
            return Err(InvError::BadSpecialLeaf { gen: idx });
        }
    }
    if let GenKind::Bscc(h) = gen.kind {
        if h > g {
            return Err(InvError::BsccGenus { gen: idx, h });
        }
    }
    lk_semantics(gen).map_err(|pair| InvError::InconsistentLk { gen: idx, pair })?;
    Ok(())
}

/// Completed symmetric linking table of a generator. Entries are the
/// averaged linkings `Lk ∈ ½ℤ`; the signed versions are recovered as
/// `Lk± = Lk ∓ ω/2`.
pub struct LkTable {
    lk: Vec<Vec<Q>>,
    om: Vec<Vec<i64>>,
}

impl LkTable {
    pub fn lk(&self, i: usize, j: usize) -> Q {
        self.lk[i][j]
    }

    /// `Lk₊(Lᵢ,Lⱼ)`
    pub fn lkp(&self, i: usize, j: usize) -> Q {
        self.lk[i][j] - q(self.om[i][j], 2)
    }

    /// `Lk₋(Lᵢ,Lⱼ)`
    pub fn lkm(&self, i: usize, j: usize) -> Q {
        self.lk[i][j] + q(self.om[i][j], 2)
    }
}

/// Complete the user-supplied Lk₊ entries to the full symmetric Lk table.
/// An entry for `(i,j)` fixes the reversed order through `Lk₊(Lⱼ,Lᵢ) =
/// Lk₋(Lᵢ,Lⱼ) = Lk₊(Lᵢ,Lⱼ) + ω`; supplying both orders is accepted only
/// when consistent. Pairs involving a special leaf must have Lk₊ = 0 in
/// the order with the special leaf second.
pub fn lk_semantics(gen: &ClasperGen) -> Result<LkTable, (usize, usize)> {
    let n = gen.leaves.len();
    let om: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| omega(&gen.leaves[i].class, &gen.leaves[j].class)).collect())
        .collect();
    let mut lk = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let given = gen.lkplus.get(&(i, j));
            if let Some(&v) = given {
                if let Some(&w) = gen.lkplus.get(&(j, i)) {
                    if w != v + om[i][j] {
                        return Err((i, j));
                    }
                }
                lk[i][j] = qi(v) + q(om[i][j], 2);
                lk[j][i] = lk[i][j];
            }
        }
    }
    // unsupplied pairs: Lk₊ = 0 in the lower-index order
    for i in 0..n {
        for j in i + 1..n {
            if !gen.lkplus.contains_key(&(i, j)) && !gen.lkplus.contains_key(&(j, i)) {
                lk[i][j] = q(om[i][j], 2);
                lk[j][i] = lk[i][j];
            }
        }
    }
    Ok(LkTable { lk, om })
}

/// Framing of a framed connected sum.
pub fn fr_connected_sum(fr_k: i64, fr_l: i64, lk: Q) -> Q {
    qi(fr_k + fr_l) + qi(2) * lk
}

/// Degree-1 tree reduction: the sum over Y generators of the wedge of
/// their leaf classes. Degree-2 and bounding-curve generators contribute
/// nothing; a special leaf kills its term through the zero class.
pub fn tau1_eval(p: &Presentation) -> W3 {
    let mut out = W3::new();
    for gen in &p.generators {
        if gen.kind == GenKind::Ygraph {
            out = out.add(&wedge3(
                &gen.leaves[0].class,
                &gen.leaves[1].class,
                &gen.leaves[2].class,
            ));
        }
    }
    out
}

/// Boolean polynomial: the sum over Y generators of `∏ᵢ(h̄ᵢ + fᵢ·1̄)`.
/// Degree-2 generators contribute nothing; bounding-curve generators are
/// unsupported.
pub fn beta_eval(p: &Presentation) -> Result<BoolPoly, InvError> {
    let mut out = BoolPoly::zero();
    for (idx, gen) in p.generators.iter().enumerate() {
        match gen.kind {
            GenKind::Bscc(_) => return Err(InvError::BetaOnBscc { gen: idx }),
            GenKind::Ygraph => {
                let mut term = BoolPoly::one();
                for leaf in &gen.leaves {
                    let mut f = affine_bar(&leaf.class);
                    if leaf.framing.rem_euclid(2) == 1 {
                        f = f.add(&BoolPoly::one());
                    }
                    term = term.mul(&f);
                }
                out = out.add(&term);
            }
            _ => {}
        }
    }
    Ok(out)
}

fn half_h_square(k: &HClass, l: &HClass, g: usize) -> SymPair {
    // ½H(k,l|k,l) = (k∧l)⊗(k∧l)
    let _ = g;
    tensor_square(&wedge2(k, l))
}

/// Z₂ variation of a single supported generator.
pub fn z2_gen(idx: usize, gen: &ClasperGen, g: usize) -> Result<DiagElem, InvError> {
    let lk = lk_semantics(gen).map_err(|pair| InvError::InconsistentLk { gen: idx, pair })?;
    let mut out = DiagElem::zero(g);
    match gen.kind {
        GenKind::Theta2graph => {
            out.theta = qi(1);
        }
        GenKind::Phi2graph => {
            let (h, hp) = (&gen.leaves[0].class, &gen.leaves[1].class);
            out.phi = sym2(h, hp);
            out.theta = q(pairing(h, hp), 2);
        }
        GenKind::Bscc(h) => {
            let mut t = SymPair::new();
            for i in 1..=h {
                let wi = wedge2(&HClass::alpha(g, i), &HClass::beta(g, i));
                t = t.add(&tensor_square(&wi));
                for j in i + 1..=h {
                    let wj = wedge2(&HClass::alpha(g, j), &HClass::beta(g, j));
                    t = t.add(&sym_arrow(&wi, &wj));
                }
            }
            out.h = t;
            out.theta = -q(h as i64, 8);
        }
        GenKind::H2graph => {
            let l: Vec<&HClass> = gen.leaves.iter().map(|f| &f.class).collect();
            out.h = sym_arrow(&wedge2(l[0], l[1]), &wedge2(l[2], l[3]));
            let mut phi = sym2(l[1], l[3]).scale(lk.lk(0, 2));
            phi = phi.add(&sym2(l[0], l[2]).scale(lk.lk(1, 3)));
            phi = phi.sub(&sym2(l[1], l[2]).scale(lk.lk(0, 3)));
            phi = phi.sub(&sym2(l[0], l[3]).scale(lk.lk(1, 2)));
            out.phi = phi;
            out.theta = lk.lk(0, 3) * lk.lk(1, 2) - lk.lk(0, 2) * lk.lk(1, 3);
        }
        GenKind::Ygraph => {
            // one special leaf is consumed by the surgery picture; the
            // remaining two leaves play the roles of K and L
            let si = gen
                .leaves
                .iter()
                .position(|f| f.special)
                .ok_or(InvError::UnsupportedForZ2 { gen: idx })?;
            let rest: Vec<usize> = (0..3).filter(|&i| i != si).collect();
            let (ki, li) = (rest[0], rest[1]);
            let (k, l) = (&gen.leaves[ki].class, &gen.leaves[li].class);
            let (fr_k, fr_l) = (gen.leaves[ki].framing, gen.leaves[li].framing);
            let lkl = lk.lk(ki, li);
            out.h = half_h_square(k, l, g);
            out.theta = q(1, 2) * (lkl * lkl + lkl - qi(fr_k * fr_l));
            let mut phi = sym2(k, k).scale(q(fr_l, 2));
            phi = phi.add(&sym2(l, l).scale(q(fr_k, 2)));
            phi = phi.sub(&sym2(k, l).scale(q(1, 2) + lkl));
            out.phi = phi;
        }
    }
    Ok(out.reduce())
}

/// Z₂ of the whole presentation: the sum of the per-generator variations.
/// Valid once every generator has vanishing degree-1 part, which makes the
/// composition cross-terms vanish.
pub fn z2_eval(p: &Presentation) -> Result<DiagElem, InvError> {
    for (idx, gen) in p.generators.iter().enumerate() {
        validate_gen(idx, gen, p.genus)?;
        if gen.kind == GenKind::Ygraph && !gen.leaves.iter().any(|f| f.special) {
            return Err(InvError::UnsupportedForZ2 { gen: idx });
        }
    }
    if !tau1_eval(p).is_zero() {
        return Err(InvError::Tau1Nonzero);
    }
    let mut out = DiagElem::zero(p.genus);
    for (idx, gen) in p.generators.iter().enumerate() {
        out = out.add(&z2_gen(idx, gen, p.genus)?);
    }
    Ok(out.reduce())
}

/// Degree-2 tree reduction, as a reduced coset representative.
pub fn tau2_eval(p: &Presentation) -> Result<SymPair, InvError> {
    Ok(z2_eval(p)?.h)
}

/// Torsion quadratic part.
pub fn alpha_eval(p: &Presentation) -> Result<Sym2, InvError> {
    Ok(z2_eval(p)?.phi.scale(-qi(2)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreValues {
    pub dprime: Q,
    pub dsecond: Q,
    pub d: Q,
    pub lambda: Q,
}

/// The integer core and its companions, computed from Z₂ along both
/// routes: `d = 2d′ + 48d″` directly, and `d = −24λ − 12Φ_Θ(α)
/// − 12H_Θ(τ₂) − 2d̄′(τ₂)` through the Casson value. Disagreement or a
/// failed integrality/divisibility check is an internal error.
pub fn core_eval(p: &Presentation) -> Result<CoreValues, InvError> {
    let z2 = z2_eval(p)?;
    let g = p.genus;
    let tau2 = &z2.h;
    let alpha = z2.phi.scale(-qi(2));
    let dsecond = z2.theta;
    let dprime = -d_bar_prime(tau2, g);
    let d = qi(2) * dprime + qi(48) * dsecond;
    let lambda = -qi(2) * dsecond - q(1, 2) * phi_theta(&alpha, g) - q(1, 2) * h_theta(tau2, g);
    let d_bis = -qi(24) * lambda
        - qi(12) * phi_theta(&alpha, g)
        - qi(12) * h_theta(tau2, g)
        - qi(2) * d_bar_prime(tau2, g);
    if d != d_bis {
        return Err(InvError::Internal(format!("d route mismatch: {d} vs {d_bis}")));
    }
    if !d.is_integer() || d.numer() % 8 != 0 {
        return Err(InvError::Internal(format!("d not in 8Z: {d}")));
    }
    if !lambda.is_integer() {
        return Err(InvError::Internal(format!("lambda not integral: {lambda}")));
    }
    Ok(CoreValues { dprime, dsecond, d, lambda })
}

/// Aggregated report. The degree-2 fields are present only when the
/// degree-1 part vanishes and every generator carries a surgery formula
/// for Z₂; otherwise `kc_reason` explains the omission.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub tau1: W3,
    pub beta: Option<BoolPoly>,
    pub tau2: Option<SymPair>,
    pub alpha: Option<Sym2>,
    pub z2: Option<DiagElem>,
    pub core: Option<CoreValues>,
    pub kc_reason: Option<String>,
}

pub fn report(p: &Presentation) -> Result<InvariantReport, InvError> {
    for (idx, gen) in p.generators.iter().enumerate() {
        validate_gen(idx, gen, p.genus)?;
    }
    let tau1 = tau1_eval(p);
    let beta = beta_eval(p).ok();
    let (tau2, alpha, z2, core, kc_reason) = match z2_eval(p) {
        Ok(z2) => {
            let core = core_eval(p)?;
            (Some(z2.h.clone()), Some(z2.phi.scale(-qi(2))), Some(z2), Some(core), None)
        }
        Err(InvError::Internal(m)) => return Err(InvError::Internal(m)),
        Err(e) => (None, None, None, None, Some(format!("{e:?}"))),
    };
    Ok(InvariantReport { tau1, beta, tau2, alpha, z2, core, kc_reason })
}
