//! Exterior and symmetric powers of `H`, the symmetrized pairing `x ↔ y`,
//! the contraction `Λ³H -> H`, the map `L` to `Λ²H ⊗ Z_2`, the embedding of
//! `Λ⁴H` into the symmetric square of `Λ²H`, and canonical coset reduction
//! for the quotient by that image.
//!
//! Basis conventions: `Λ^k H` is indexed by strictly increasing tuples of
//! coordinate slots (`0..2g`); `S²H` by weakly increasing pairs; the
//! symmetric square of `Λ²H` by pairs `P <= Q` of `Λ²`-basis keys, where
//! `e_{P,Q} = P⊗Q + Q⊗P` for `P < Q` and `e_{P,P} = P⊗P`.

use crate::matrix::{hnf, Hnf, Mat};
use crate::symplectic::{omega_idx, HClass};
use crate::{qi, Q};
use num_traits::Zero;
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

/// Linear-combination maps: add a term, combine, scale, compare to zero.
macro_rules! linear_map_ops {
    ($name:ident, $key:ty) => {
        #[derive(Clone, PartialEq, Eq, Debug, Default)]
        pub struct $name(pub BTreeMap<$key, Q>);

        impl $name {
            pub fn new() -> Self {
                $name(BTreeMap::new())
            }

            pub fn term(&mut self, k: $key, c: Q) {
                if c.is_zero() {
                    return;
                }
                let e = self.0.entry(k).or_insert_with(Q::zero);
                *e += c;
                if e.is_zero() {
                    self.0.remove(&k);
                }
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = self.clone();
                for (&k, &c) in &other.0 {
                    out.term(k, c);
                }
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.scale(-qi(1)))
            }

            pub fn scale(&self, s: Q) -> Self {
                if s.is_zero() {
                    return Self::new();
                }
                $name(self.0.iter().map(|(&k, &c)| (k, c * s)).collect())
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_empty()
            }

            pub fn coeff(&self, k: &$key) -> Q {
                self.0.get(k).copied().unwrap_or_else(Q::zero)
            }
        }
    };
}

linear_map_ops!(W2, (usize, usize));
linear_map_ops!(W3, [usize; 3]);
linear_map_ops!(W4, [usize; 4]);
linear_map_ops!(Sym2, (usize, usize));

/// Key of the symmetric square of `Λ²H`: a sorted pair of `Λ²` basis keys.
pub type PairKey = ((usize, usize), (usize, usize));

linear_map_ops!(SymPair, PairKey);

/// Sort a slot tuple, returning the sorted key and the permutation sign,
/// or `None` when two slots coincide.
pub fn sort_signed(mut v: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] >= v[j] {
            if v[j - 1] == v[j] {
                return None;
            }
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    Some((v, sign))
}

pub fn wedge2(x: &HClass, y: &HClass) -> W2 {
    let n = x.0.len();
    let mut out = W2::new();
    for i in 0..n {
        for j in i + 1..n {
            out.term((i, j), qi(x.0[i] * y.0[j] - x.0[j] * y.0[i]));
        }
    }
    out
}

pub fn wedge3(x: &HClass, y: &HClass, z: &HClass) -> W3 {
    let n = x.0.len();
    let vs = [x, y, z];
    let mut out = W3::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = vs[0].0[i] * vs[1].0[j] * vs[2].0[k];
                if c == 0 {
                    continue;
                }
                if let Some((s, sg)) = sort_signed(vec![i, j, k]) {
                    out.term([s[0], s[1], s[2]], qi(sg * c));
                }
            }
        }
    }
    out
}

pub fn wedge4(x: &HClass, y: &HClass, z: &HClass, w: &HClass) -> W4 {
    let n = x.0.len();
    let vs = [x, y, z, w];
    let mut out = W4::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let c = vs[0].0[i] * vs[1].0[j] * vs[2].0[k] * vs[3].0[l];
                    if c == 0 {
                        continue;
                    }
                    if let Some((s, sg)) = sort_signed(vec![i, j, k, l]) {
                        out.term([s[0], s[1], s[2], s[3]], qi(sg * c));
                    }
                }
            }
        }
    }
    out
}

/// Symmetric product `x · y` in `S²H`.
pub fn sym2(x: &HClass, y: &HClass) -> Sym2 {
    let n = x.0.len();
    let mut out = Sym2::new();
    for i in 0..n {
        for j in i..n {
            let c = if i == j { x.0[i] * y.0[i] } else { x.0[i] * y.0[j] + x.0[j] * y.0[i] };
            out.term((i, j), qi(c));
        }
    }
    out
}

fn pair_key(p: (usize, usize), q: (usize, usize)) -> PairKey {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

/// `x ↔ y := x ⊗ y + y ⊗ x` for `x, y` in `Λ²H`.
pub fn sym_arrow(x: &W2, y: &W2) -> SymPair {
    let mut out = SymPair::new();
    for (&p, &cp) in &x.0 {
        for (&q, &cq) in &y.0 {
            let c = cp * cq;
            if p == q {
                out.term((p, p), c * qi(2));
            } else {
                out.term(pair_key(p, q), c);
            }
        }
    }
    out
}

/// `x ⊗ x` for `x` in `Λ²H` (half of `x ↔ x`).
pub fn tensor_square(x: &W2) -> SymPair {
    sym_arrow(x, x).scale(Q::new(1, 2))
}

/// `a∧b∧c∧d -> (a∧b)↔(c∧d) − (a∧c)↔(b∧d) + (a∧d)↔(b∧c)`, extended linearly.
pub fn embed_lambda4(w: &W4) -> SymPair {
    let mut out = SymPair::new();
    for (&[a, b, c, d], &co) in &w.0 {
        for (p, q, s) in [((a, b), (c, d), 1), ((a, c), (b, d), -1), ((a, d), (b, c), 1)] {
            // p and q are disjoint slot pairs, so p != q
            out.term(pair_key(p, q), co * qi(s));
        }
    }
    out
}

/// Contraction `Λ³H -> H`: `a∧b∧c -> 2(ω(a,b)c + ω(b,c)a + ω(c,a)b)`.
pub fn cont(t: &W3, g: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); 2 * g];
    for (&[a, b, c], &co) in &t.0 {
        let two = co * qi(2);
        out[c] += two * qi(omega_idx(g, a, b));
        out[a] += two * qi(omega_idx(g, b, c));
        out[b] += two * qi(omega_idx(g, c, a));
    }
    out
}

/// `L : (Λ²H⊗Λ²H)^{S_2} -> Λ²H ⊗ Z_2`: diagonal tensors `P⊗P` map to `{P}`,
/// the symmetrized off-diagonal generators map to zero.
///
/// Requires integer coefficients; panics otherwise.
pub fn lmap(x: &SymPair) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (&(p, q), &c) in &x.0 {
        assert!(c.is_integer(), "L is only defined on integral elements");
        if p == q && c.to_integer().rem_euclid(2) == 1 {
            out.insert(p);
        }
    }
    out
}

/// Basis of `Λ²H` at genus `g`, in lexicographic order.
pub fn w2_basis(g: usize) -> Vec<(usize, usize)> {
    let n = 2 * g;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Basis of the symmetric square of `Λ²H` at genus `g`.
pub fn sympair_basis(g: usize) -> Vec<PairKey> {
    let ps = w2_basis(g);
    let mut out = Vec::new();
    for (i, &p) in ps.iter().enumerate() {
        for &q in &ps[i..] {
            out.push((p, q));
        }
    }
    out
}

/// Basis of `Λ⁴H` at genus `g`.
pub fn w4_basis(g: usize) -> Vec<[usize; 4]> {
    let n = 2 * g;
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

pub struct D2Cache {
    pub basis: Vec<PairKey>,
    pub index: HashMap<PairKey, usize>,
    /// HNF of the `Λ⁴H` image lattice in `sympair_basis` coordinates.
    pub image: Hnf,
}

static D2_CACHES: Lazy<Mutex<HashMap<usize, Arc<D2Cache>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn d2_cache(g: usize) -> Arc<D2Cache> {
    let mut map = D2_CACHES.lock().unwrap();
    map.entry(g)
        .or_insert_with(|| {
            let basis = sympair_basis(g);
            let index: HashMap<PairKey, usize> =
                basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            let rows: Vec<Vec<i128>> = w4_basis(g)
                .iter()
                .map(|&k| {
                    let mut w = W4::new();
                    w.term(k, qi(1));
                    let e = embed_lambda4(&w);
                    let mut row = vec![0i128; basis.len()];
                    for (kk, c) in &e.0 {
                        row[index[kk]] = *c.numer() as i128;
                    }
                    row
                })
                .collect();
            let image = if rows.is_empty() {
                hnf(&Mat::zeros(0, basis.len()), false)
            } else {
                hnf(&Mat::from_rows(rows), false)
            };
            Arc::new(D2Cache { basis, index, image })
        })
        .clone()
}

/// Canonical representative of `x` modulo the rational span of the `Λ⁴H`
/// image: pivot coordinates of the image lattice are eliminated exactly.
pub fn d2_reduce(x: &SymPair, g: usize) -> SymPair {
    let cache = d2_cache(g);
    let mut out = x.clone();
    for &(r, c) in &cache.image.pivots {
        let key = cache.basis[c];
        let coeff = out.coeff(&key);
        if coeff.is_zero() {
            continue;
        }
        let pivot = cache.image.h[(r, c)] as i64;
        let factor = coeff / qi(pivot);
        for (j, &k2) in cache.basis.iter().enumerate() {
            let v = cache.image.h[(r, j)] as i64;
            if v != 0 {
                out.term(k2, -factor * qi(v));
            }
        }
    }
    out
}

/// Equality in the quotient of the symmetric square by `Λ⁴H` (over `Q`).
pub fn d2_equal(x: &SymPair, y: &SymPair, g: usize) -> bool {
    d2_reduce(&x.sub(y), g).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::snf;
    use crate::symplectic::HClass;

    fn a(g: usize, i: usize) -> HClass {
        HClass::alpha(g, i)
    }
    fn b(g: usize, i: usize) -> HClass {
        HClass::beta(g, i)
    }

    #[test]
    fn wedge_antisymmetry() {
        let g = 2;
        let x = a(g, 1).add(&b(g, 2));
        let y = b(g, 1);
        assert_eq!(wedge2(&x, &y), wedge2(&y, &x).scale(-qi(1)));
        assert!(wedge2(&x, &x).is_zero());
        assert!(wedge3(&x, &y, &x).is_zero());
        assert!(wedge4(&x, &y, &a(g, 2), &y).is_zero());
    }

    #[test]
    fn sym_arrow_examples() {
        let g = 2;
        let ab = wedge2(&a(g, 1), &b(g, 1));
        // (a∧b, a∧b) -> 2 (a∧b)⊗(a∧b)
        let s = sym_arrow(&ab, &ab);
        assert_eq!(s.coeff(&((0, 2), (0, 2))), qi(2));
        assert_eq!(s.0.len(), 1);
        assert_eq!(tensor_square(&ab).coeff(&((0, 2), (0, 2))), qi(1));
        // symmetry and coefficient 1 on distinct keys
        let cd = wedge2(&a(g, 2), &b(g, 2));
        let t = sym_arrow(&ab, &cd);
        assert_eq!(t, sym_arrow(&cd, &ab));
        assert_eq!(t.coeff(&((0, 2), (1, 3))), qi(1));
        assert_eq!(t.0.len(), 1);
    }

    #[test]
    fn embed_lambda4_display() {
        let g = 2;
        let w = wedge4(&a(g, 1), &b(g, 1), &a(g, 2), &b(g, 2));
        let e = embed_lambda4(&w);
        // (a1∧b1)↔(a2∧b2) − (a1∧a2)↔(b1∧b2) + (a1∧b2)↔(b1∧a2)
        assert_eq!(e.coeff(&((0, 2), (1, 3))), qi(1));
        assert_eq!(e.coeff(&((0, 1), (2, 3))), -qi(1));
        assert_eq!(e.coeff(&((0, 3), (1, 2))), -qi(1)); // b1∧a2 = −(a2∧b1)
        assert_eq!(e.0.len(), 3);
    }

    #[test]
    fn embed_injective_g2() {
        // dim Λ⁴H = 1 at g = 2 and the image has rank 1
        let cache = d2_cache(2);
        assert_eq!(cache.image.rank(), 1);
        assert_eq!(w4_basis(2).len(), 1);
    }

    #[test]
    fn cont_examples() {
        let g = 2;
        let t = wedge3(&a(g, 1), &b(g, 1), &a(g, 2));
        let v = cont(&t, g);
        let mut expect = vec![Q::zero(); 4];
        expect[1] = qi(2); // 2·a2
        assert_eq!(v, expect);
        let g = 3;
        let t = wedge3(&a(g, 1), &a(g, 2), &a(g, 3));
        assert!(cont(&t, g).iter().all(|c| c.is_zero()));
        // coordinates always even on integer inputs
        let x = a(g, 1).add(&b(g, 2)).add(&b(g, 3).scale(3));
        let t = wedge3(&x, &b(g, 1), &a(g, 2));
        for c in cont(&t, g) {
            assert!(c.is_integer());
            assert_eq!(c.to_integer().rem_euclid(2), 0);
        }
    }

    #[test]
    fn lmap_examples() {
        let g = 1;
        let ab = wedge2(&a(g, 1), &b(g, 1));
        // image of sym_arrow dies (diagonal coefficient is even)
        assert!(lmap(&sym_arrow(&ab, &ab)).is_empty());
        // P⊗P -> {P}
        let sq = tensor_square(&ab);
        let l = lmap(&sq);
        assert_eq!(l, BTreeSet::from([(0, 1)]));
        assert!(lmap(&sq.scale(qi(2))).is_empty());
    }

    #[test]
    fn d2_quotient_ranks() {
        for g in 1..=3usize {
            let m = w2_basis(g).len();
            let want = m * (m + 1) / 2 - w4_basis(g).len();
            let cache = d2_cache(g);
            assert_eq!(sympair_basis(g).len() - cache.image.rank(), want);
            // torsion-freeness: every elementary divisor of the image is 1
            let rows: Vec<Vec<i128>> = (0..cache.image.rank())
                .map(|i| cache.image.h.row(i).to_vec())
                .collect();
            if !rows.is_empty() {
                let s = snf(&Mat::from_rows(rows), false, false);
                assert!(s.divisors().iter().all(|&d| d == 1));
            }
        }
    }

    #[test]
    fn d2_reduce_properties() {
        let g = 2;
        let w = wedge4(&a(g, 1), &b(g, 1), &a(g, 2), &b(g, 2));
        assert!(d2_reduce(&embed_lambda4(&w), g).is_zero());
        let x = sym_arrow(&wedge2(&a(g, 1), &b(g, 1)), &wedge2(&a(g, 2), &b(g, 1)));
        let r = d2_reduce(&x, g);
        assert_eq!(d2_reduce(&r, g), r);
        assert!(d2_equal(&x, &r, g));
    }

    #[test]
    fn sequence_exactness_small_genus() {
        // The mod-2 sequence: kernel of L equals the lattice generated by the
        // sym_arrow images of basis pairs, compared as integer row spans.
        for g in 1..=3usize {
            let basis = sympair_basis(g);
            let idx: HashMap<PairKey, usize> =
                basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            let ps = w2_basis(g);
            let mut rows = Vec::new();
            for (i, &p) in ps.iter().enumerate() {
                for &q in &ps[i..] {
                    let mut wp = W2::new();
                    wp.term(p, qi(1));
                    let mut wq = W2::new();
                    wq.term(q, qi(1));
                    let s = sym_arrow(&wp, &wq);
                    let mut row = vec![0i128; basis.len()];
                    for (k, c) in &s.0 {
                        row[idx[k]] = *c.numer() as i128;
                    }
                    rows.push(row);
                }
            }
            let image = hnf(&Mat::from_rows(rows), false);
            // kernel of L: integer vectors whose diagonal coordinates are even
            let mut krows = Vec::new();
            for (j, &(p, q)) in basis.iter().enumerate() {
                let mut row = vec![0i128; basis.len()];
                row[j] = if p == q { 2 } else { 1 };
                krows.push(row);
            }
            let kernel = hnf(&Mat::from_rows(krows), false);
            assert_eq!(image.h, kernel.h);
        }
    }
}
