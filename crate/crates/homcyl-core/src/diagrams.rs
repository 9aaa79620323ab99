//! Jacobi-diagram spaces in internal degree <= 2, over `H`-colors and over
//! the plus/minus label alphabet, in unordered and ordered flavors.
//!
//! Coordinates: the degree-1 part is `Λ³` of the color module; the
//! connected degree-2 parts are the symmetric square of `Λ²` modulo `Λ⁴`
//! (H graphs), `S²` (Φ graphs) and a single Θ coordinate; the disconnected
//! part is spanned by unordered pairs of `Λ³` keys. A small ribbon-graph
//! engine normalizes arbitrary degree-<=2 diagrams into these coordinates
//! and performs the edge gluings behind the ordering isomorphism χ, the
//! doubling map κ and the stacking products.
//!
//! Sign conventions (the relations fix all signs only up to a global choice
//! per shape; these choices are pinned by the closed-form tests below):
//! a Y vertex reads its legs cyclically as `a∧b∧c`; an H graph with cyclic
//! vertices `(a, b, mid)` and `(c, d, mid)` is `(a∧b)↔(c∧d)`; a Φ graph is
//! `+Φ` when its two connecting edges are crossed relative to the leg-first
//! rotation of both vertices; a Θ is `+Θ` when its half-edge matching is an
//! odd permutation relative to the two cyclic orders.

use crate::multilinear::{
    d2_reduce, sort_signed, sym2, sym_arrow, wedge2, PairKey, Sym2, SymPair, W2, W3,
};
use crate::symplectic::{omega_idx, pairing_idx, HClass, LpmLabel};
use crate::{q, qi, Q};
use num_traits::Zero;
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use thiserror::Error;

pub type Triple = [usize; 3];

/// Element of a degree-<=2 diagram space in canonical coordinates.
/// The same coordinates serve the unordered `H`-colored space, the
/// label-colored space and the ordered space (whose canonical basis is the
/// label order image of the unordered basis).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagElem {
    pub g: usize,
    /// degree-0 (scalar) part, used by the stacking products
    pub c0: Q,
    /// degree 1: Y diagrams as `Λ³`
    pub y: W3,
    /// degree 2, loop degree 0, connected: H graphs modulo IHX
    pub h: SymPair,
    /// degree 2, loop degree 1: Φ graphs as `S²`
    pub phi: Sym2,
    /// degree 2, loop degree 2: Θ coefficient
    pub theta: Q,
    /// degree 2 disconnected: unordered pairs of Y diagrams
    pub yy: BTreeMap<(Triple, Triple), Q>,
}

impl DiagElem {
    pub fn zero(g: usize) -> Self {
        DiagElem {
            g,
            c0: Q::zero(),
            y: W3::new(),
            h: SymPair::new(),
            phi: Sym2::new(),
            theta: Q::zero(),
            yy: BTreeMap::new(),
        }
    }

    pub fn one(g: usize) -> Self {
        let mut out = Self::zero(g);
        out.c0 = qi(1);
        out
    }

    pub fn term_yy(&mut self, a: Triple, b: Triple, c: Q) {
        if c.is_zero() {
            return;
        }
        let k = if a <= b { (a, b) } else { (b, a) };
        let e = self.yy.entry(k).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.yy.remove(&k);
        }
    }

    /// Keep the H block on canonical coset representatives.
    pub fn reduce(mut self) -> Self {
        self.h = d2_reduce(&self.h, self.g);
        self
    }

    pub fn add(&self, o: &DiagElem) -> DiagElem {
        assert_eq!(self.g, o.g);
        let mut out = self.clone();
        out.c0 += o.c0;
        out.y = out.y.add(&o.y);
        out.h = out.h.add(&o.h);
        out.phi = out.phi.add(&o.phi);
        out.theta += o.theta;
        for (&(a, b), &c) in &o.yy {
            out.term_yy(a, b, c);
        }
        out
    }

    pub fn sub(&self, o: &DiagElem) -> DiagElem {
        self.add(&o.scale(-qi(1)))
    }

    pub fn scale(&self, s: Q) -> DiagElem {
        if s.is_zero() {
            return DiagElem::zero(self.g);
        }
        DiagElem {
            g: self.g,
            c0: self.c0 * s,
            y: self.y.scale(s),
            h: self.h.scale(s),
            phi: self.phi.scale(s),
            theta: self.theta * s,
            yy: self.yy.iter().map(|(&k, &c)| (k, c * s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero()
            && self.y.is_zero()
            && self.h.is_zero()
            && self.phi.is_zero()
            && self.theta.is_zero()
            && self.yy.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shape {
    Y,
    Hgraph,
    Phi,
    Theta,
}

impl Shape {
    pub fn legs(&self) -> usize {
        match self {
            Shape::Y => 3,
            Shape::Hgraph => 4,
            Shape::Phi => 2,
            Shape::Theta => 0,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Color {
    H(HClass),
    Lpm(LpmLabel),
}

#[derive(Clone, Debug)]
pub struct DiagTerm {
    pub shape: Shape,
    pub legs: Vec<Color>,
    pub coeff: Q,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum DiagError {
    #[error("shape expects {expect} legs, got {got}")]
    LegCount { expect: usize, got: usize },
    #[error("color does not fit genus {genus}")]
    GenusMismatch { genus: usize },
}

fn expand_color(c: &Color, g: usize) -> Result<Vec<(usize, i64)>, DiagError> {
    match c {
        Color::H(h) => {
            if h.0.len() != 2 * g {
                return Err(DiagError::GenusMismatch { genus: g });
            }
            Ok(h.0.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v)).collect())
        }
        Color::Lpm(l) => {
            if l.index > g {
                return Err(DiagError::GenusMismatch { genus: g });
            }
            Ok(vec![(l.slot(g), 1)])
        }
    }
}

/// Multilinear expansion of a term's legs into slot tuples with coefficients.
fn expand_legs(term: &DiagTerm, g: usize) -> Result<Vec<(Vec<usize>, Q)>, DiagError> {
    let expect = term.shape.legs();
    if term.legs.len() != expect {
        return Err(DiagError::LegCount { expect, got: term.legs.len() });
    }
    let alts: Vec<Vec<(usize, i64)>> =
        term.legs.iter().map(|c| expand_color(c, g)).collect::<Result<_, _>>()?;
    let mut out = vec![(Vec::new(), term.coeff)];
    for alt in &alts {
        let mut next = Vec::new();
        for (slots, c) in &out {
            for &(s, v) in alt {
                let mut slots = slots.clone();
                slots.push(s);
                next.push((slots, c * qi(v)));
            }
        }
        out = next;
    }
    Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

// ---------------------------------------------------------------------------
// ribbon engine

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Half {
    Leg { slot: usize, height: i64 },
    Edge(usize),
}

/// Trivalent diagram with <= 2 internal vertices: cyclically ordered
/// half-edge triples; shared edge ids pair half-edges.
#[derive(Clone, Debug)]
struct RDiag {
    verts: Vec<[Half; 3]>,
    coeff: Q,
}

impl RDiag {
    fn legs(&self) -> Vec<(i64, usize, usize, usize)> {
        // (height, vertex, position, slot) sorted by height
        let mut out = Vec::new();
        for (v, tri) in self.verts.iter().enumerate() {
            for (p, h) in tri.iter().enumerate() {
                if let Half::Leg { slot, height } = h {
                    out.push((*height, v, p, *slot));
                }
            }
        }
        out.sort();
        out
    }
}

/// Identify the shape of a (height-free) diagram and add it to `out`.
fn canonicalize(d: &RDiag, out: &mut DiagElem) {
    if d.coeff.is_zero() {
        return;
    }
    // looped edge at a single vertex kills the diagram
    for tri in &d.verts {
        for i in 0..3 {
            for j in i + 1..3 {
                if let (Half::Edge(a), Half::Edge(b)) = (tri[i], tri[j]) {
                    if a == b {
                        return;
                    }
                }
            }
        }
    }
    let slot_of = |h: Half| match h {
        Half::Leg { slot, .. } => slot,
        _ => unreachable!(),
    };
    match d.verts.len() {
        1 => {
            let t = d.verts[0];
            let Some((s, sg)) =
                sort_signed(vec![slot_of(t[0]), slot_of(t[1]), slot_of(t[2])])
            else {
                return;
            };
            out.y.term([s[0], s[1], s[2]], d.coeff * qi(sg));
        }
        2 => {
            let (t0, t1) = (d.verts[0], d.verts[1]);
            let edge_pos = |t: &[Half; 3]| -> Vec<usize> {
                (0..3).filter(|&i| matches!(t[i], Half::Edge(_))).collect()
            };
            let e0 = edge_pos(&t0);
            match e0.len() {
                0 => {
                    // two disjoint Y's
                    let key = |t: &[Half; 3]| {
                        sort_signed(vec![slot_of(t[0]), slot_of(t[1]), slot_of(t[2])])
                    };
                    let (Some((s0, g0)), Some((s1, g1))) = (key(&t0), key(&t1)) else {
                        return;
                    };
                    out.term_yy(
                        [s0[0], s0[1], s0[2]],
                        [s1[0], s1[1], s1[2]],
                        d.coeff * qi(g0 * g1),
                    );
                }
                1 => {
                    // H graph: rotate each vertex so the edge comes last
                    let rot = |t: &[Half; 3]| -> (usize, usize) {
                        let p = (0..3).find(|&i| matches!(t[i], Half::Edge(_))).unwrap();
                        (slot_of(t[(p + 1) % 3]), slot_of(t[(p + 2) % 3]))
                    };
                    let (a, b) = rot(&t0);
                    let (c, d2) = rot(&t1);
                    let w = |x: usize, y: usize| -> Option<(W2, i64)> {
                        match x.cmp(&y) {
                            std::cmp::Ordering::Less => {
                                let mut w = W2::new();
                                w.term((x, y), qi(1));
                                Some((w, 1))
                            }
                            std::cmp::Ordering::Greater => {
                                let mut w = W2::new();
                                w.term((y, x), qi(1));
                                Some((w, -1))
                            }
                            std::cmp::Ordering::Equal => None,
                        }
                    };
                    let (Some((w1, s1)), Some((w2, s2))) = (w(a, b), w(c, d2)) else {
                        return;
                    };
                    out.h = out.h.add(&sym_arrow(&w1, &w2).scale(d.coeff * qi(s1 * s2)));
                }
                2 => {
                    // Φ graph: leg-first rotation; crossed edges carry +
                    let rot = |t: &[Half; 3]| -> (usize, usize, usize) {
                        let p = (0..3).find(|&i| matches!(t[i], Half::Leg { .. })).unwrap();
                        let id = |h: Half| match h {
                            Half::Edge(e) => e,
                            _ => unreachable!(),
                        };
                        (slot_of(t[p]), id(t[(p + 1) % 3]), id(t[(p + 2) % 3]))
                    };
                    let (a, e1, e2) = rot(&t0);
                    let (b, f1, f2) = rot(&t1);
                    let sign = if e1 == f2 && e2 == f1 {
                        1
                    } else {
                        debug_assert!(e1 == f1 && e2 == f2);
                        -1
                    };
                    let k = if a <= b { (a, b) } else { (b, a) };
                    out.phi.term(k, d.coeff * qi(sign));
                }
                3 => {
                    // Θ: odd matchings carry +
                    let id = |h: Half| match h {
                        Half::Edge(e) => e,
                        _ => unreachable!(),
                    };
                    let pos1 = |e: usize| (0..3).find(|&i| id(t1[i]) == e).unwrap();
                    let perm = [pos1(id(t0[0])), pos1(id(t0[1])), pos1(id(t0[2]))];
                    let even = perm == [0, 1, 2] || perm == [1, 2, 0] || perm == [2, 0, 1];
                    out.theta += d.coeff * qi(if even { -1 } else { 1 });
                }
                _ => unreachable!(),
            }
        }
        _ => panic!("internal degree above 2"),
    }
}

/// STU rewriting into the canonical height order (colors ascending by slot):
/// swapping two adjacent legs with the lower slot above the upper slot
/// produces the swapped diagram plus `ω(lower, upper)` times the gluing.
fn reduce_ordered(d: &RDiag, g: usize, out: &mut DiagElem) {
    let legs = d.legs();
    let inv = legs.windows(2).position(|w| w[0].3 > w[1].3);
    let Some(p) = inv else {
        canonicalize(d, out);
        return;
    };
    let (h0, v0, p0, s0) = legs[p];
    let (h1, v1, p1, s1) = legs[p + 1];
    let mut swapped = d.clone();
    swapped.verts[v0][p0] = Half::Leg { slot: s0, height: h1 };
    swapped.verts[v1][p1] = Half::Leg { slot: s1, height: h0 };
    reduce_ordered(&swapped, g, out);
    let w = omega_idx(g, s0, s1);
    if w != 0 {
        let mut glued = d.clone();
        let fresh = 1000
            + d.verts
                .iter()
                .flatten()
                .filter_map(|h| match h {
                    Half::Edge(e) => Some(*e),
                    _ => None,
                })
                .max()
                .unwrap_or(0);
        glued.verts[v0][p0] = Half::Edge(fresh);
        glued.verts[v1][p1] = Half::Edge(fresh);
        glued.coeff = d.coeff * qi(w);
        reduce_ordered(&glued, g, out);
    }
}

fn y_rdiag(slots: &[usize], heights: &[i64], coeff: Q) -> RDiag {
    RDiag {
        verts: vec![[
            Half::Leg { slot: slots[0], height: heights[0] },
            Half::Leg { slot: slots[1], height: heights[1] },
            Half::Leg { slot: slots[2], height: heights[2] },
        ]],
        coeff,
    }
}

fn h_rdiag(slots: &[usize], heights: &[i64], coeff: Q) -> RDiag {
    RDiag {
        verts: vec![
            [
                Half::Leg { slot: slots[0], height: heights[0] },
                Half::Leg { slot: slots[1], height: heights[1] },
                Half::Edge(0),
            ],
            [
                Half::Leg { slot: slots[2], height: heights[2] },
                Half::Leg { slot: slots[3], height: heights[3] },
                Half::Edge(0),
            ],
        ],
        coeff,
    }
}

fn phi_rdiag(slots: &[usize], heights: &[i64], coeff: Q) -> RDiag {
    // crossed pairing, the +Φ representative
    RDiag {
        verts: vec![
            [Half::Leg { slot: slots[0], height: heights[0] }, Half::Edge(0), Half::Edge(1)],
            [Half::Leg { slot: slots[1], height: heights[1] }, Half::Edge(1), Half::Edge(0)],
        ],
        coeff,
    }
}

fn theta_rdiag(coeff: Q) -> RDiag {
    // odd matching, the +Θ representative
    RDiag {
        verts: vec![
            [Half::Edge(0), Half::Edge(1), Half::Edge(2)],
            [Half::Edge(0), Half::Edge(2), Half::Edge(1)],
        ],
        coeff,
    }
}

fn yy_rdiag(t0: Triple, t1: Triple, coeff: Q) -> RDiag {
    let leg = |s: usize| Half::Leg { slot: s, height: 0 };
    RDiag {
        verts: vec![
            [leg(t0[0]), leg(t0[1]), leg(t0[2])],
            [leg(t1[0]), leg(t1[1]), leg(t1[2])],
        ],
        coeff,
    }
}

fn term_rdiag(shape: Shape, slots: &[usize], heights: &[i64], coeff: Q) -> Option<RDiag> {
    match shape {
        Shape::Y => Some(y_rdiag(slots, heights, coeff)),
        Shape::Hgraph => Some(h_rdiag(slots, heights, coeff)),
        Shape::Phi => Some(phi_rdiag(slots, heights, coeff)),
        Shape::Theta => Some(theta_rdiag(coeff)),
    }
}

/// Normalize a sum of unordered diagrams into canonical coordinates.
pub fn normalize_unordered(terms: &[DiagTerm], g: usize) -> Result<DiagElem, DiagError> {
    let mut out = DiagElem::zero(g);
    for term in terms {
        for (slots, c) in expand_legs(term, g)? {
            let heights = vec![0i64; slots.len()];
            if let Some(rd) = term_rdiag(term.shape, &slots, &heights, c) {
                canonicalize(&rd, &mut out);
            }
        }
    }
    Ok(out.reduce())
}

/// Normalize a sum of ordered diagrams (heights = the leg list positions)
/// into the canonical ordered coordinates.
pub fn normalize_ordered(terms: &[DiagTerm], g: usize) -> Result<DiagElem, DiagError> {
    let mut out = DiagElem::zero(g);
    for term in terms {
        for (slots, c) in expand_legs(term, g)? {
            let heights: Vec<i64> = (0..slots.len() as i64).collect();
            if let Some(rd) = term_rdiag(term.shape, &slots, &heights, c) {
                reduce_ordered(&rd, g, &mut out);
            }
        }
    }
    Ok(out.reduce())
}

// ---------------------------------------------------------------------------
// canonical basis keys and the cached basis maps

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Key {
    Y(Triple),
    H(PairKey),
    Phi((usize, usize)),
    Theta,
    YY(Triple, Triple),
}

impl Key {
    /// Diagram representative: the H key on a diagonal pair is half of the
    /// doubled-legs diagram.
    fn rdiag(&self) -> RDiag {
        match *self {
            Key::Y(t) => y_rdiag(&t, &[0, 1, 2], qi(1)),
            Key::H((p, pq)) => {
                let c = if p == pq { q(1, 2) } else { qi(1) };
                h_rdiag(&[p.0, p.1, pq.0, pq.1], &[0, 1, 2, 3], c)
            }
            Key::Phi((i, j)) => phi_rdiag(&[i, j], &[0, 1], qi(1)),
            Key::Theta => theta_rdiag(qi(1)),
            Key::YY(a, b) => yy_rdiag(a, b, qi(1)),
        }
    }

    /// Euler-characteristic parity of the shape.
    fn w(&self) -> i64 {
        match self {
            Key::Y(_) => 1,
            Key::H(_) => 1,
            Key::Phi(_) => 0,
            Key::Theta => 1,
            Key::YY(_, _) => 0,
        }
    }
}

fn keys_of(x: &DiagElem) -> Vec<(Key, Q)> {
    let mut out = Vec::new();
    for (&k, &c) in &x.y.0 {
        out.push((Key::Y(k), c));
    }
    for (&k, &c) in &x.h.0 {
        out.push((Key::H(k), c));
    }
    for (&k, &c) in &x.phi.0 {
        out.push((Key::Phi(k), c));
    }
    if !x.theta.is_zero() {
        out.push((Key::Theta, x.theta));
    }
    for (&(a, b), &c) in &x.yy {
        out.push((Key::YY(a, b), c));
    }
    out
}

type KeyCache = Lazy<Mutex<HashMap<(usize, Key), DiagElem>>>;

static CHI_CACHE: KeyCache = Lazy::new(|| Mutex::new(HashMap::new()));
static KAPPA_CACHE: KeyCache = Lazy::new(|| Mutex::new(HashMap::new()));

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn chi_key(g: usize, key: Key) -> DiagElem {
    if let Some(v) = CHI_CACHE.lock().unwrap().get(&(g, key)) {
        return v.clone();
    }
    let base = key.rdiag();
    let legs = base.legs();
    let e = legs.len();
    let mut acc = DiagElem::zero(g);
    for perm in permutations(e) {
        let mut d = base.clone();
        for (i, &(_, v, p, s)) in legs.iter().enumerate() {
            d.verts[v][p] = Half::Leg { slot: s, height: perm[i] as i64 };
        }
        reduce_ordered(&d, g, &mut acc);
    }
    let mut fact = 1i64;
    for i in 1..=e as i64 {
        fact *= i;
    }
    let out = acc.scale(q(1, fact)).reduce();
    CHI_CACHE.lock().unwrap().insert((g, key), out.clone());
    out
}

/// χ: average of all orderings of the external vertices.
pub fn chi(x: &DiagElem) -> DiagElem {
    let mut out = DiagElem::zero(x.g);
    out.c0 = x.c0;
    for (k, c) in keys_of(x) {
        out = out.add(&chi_key(x.g, k).scale(c));
    }
    out.reduce()
}

/// χ⁻¹ by unwinding the strictly leg-count-lowering correction of χ.
pub fn chi_inv(x: &DiagElem) -> DiagElem {
    let mut r = x.clone();
    for _ in 0..5 {
        r = x.sub(&chi(&r).sub(&r));
    }
    debug_assert!(chi(&r).sub(x).is_zero());
    r
}

/// `s ∘ φ`: the label order embedding followed by the parity sign
/// `(−1)^{w}`; diagonal in the canonical coordinates.
pub fn phi_s(x: &DiagElem) -> DiagElem {
    let mut out = x.clone();
    out.y = out.y.scale(-qi(1));
    out.h = out.h.scale(-qi(1));
    out.theta = -out.theta;
    out
}

fn kappa_key(g: usize, key: Key) -> DiagElem {
    if let Some(v) = KAPPA_CACHE.lock().unwrap().get(&(g, key)) {
        return v.clone();
    }
    let base = key.rdiag();
    let legs = base.legs();
    // enumerate partial matchings of minus-legs with plus-legs of the same
    // index, weight 1/2 per glued pair
    let mut acc = DiagElem::zero(g);
    let mut stack = vec![(base.clone(), 0usize, 0u32)];
    while let Some((d, next, glued)) = stack.pop() {
        if next == legs.len() {
            let mut dd = d;
            dd.coeff = dd.coeff * q(1, 1i64 << glued);
            canonicalize(&dd, &mut acc);
            continue;
        }
        let (_, v0, p0, s0) = legs[next];
        // leave leg `next` unglued
        stack.push((d.clone(), next + 1, glued));
        if matches!(d.verts[v0][p0], Half::Leg { .. }) {
            for &(_, v1, p1, s1) in &legs[next + 1..] {
                if pairing_idx(g, s0, s1) == 1 && matches!(d.verts[v1][p1], Half::Leg { .. }) {
                    let mut dd = d.clone();
                    let fresh = 2000 + next * 8 + p1;
                    dd.verts[v0][p0] = Half::Edge(fresh);
                    dd.verts[v1][p1] = Half::Edge(fresh);
                    stack.push((dd, next + 1, glued + 1));
                }
            }
        }
    }
    let out = acc.scale(qi(if key.w() % 2 == 1 { -1 } else { 1 })).reduce();
    KAPPA_CACHE.lock().unwrap().insert((g, key), out.clone());
    out
}

/// κ: `(−1)^w` times the sum over all ways of half-weight gluing
/// minus-labeled legs to plus-labeled legs of the same index.
pub fn kappa(x: &DiagElem) -> DiagElem {
    let mut out = DiagElem::zero(x.g);
    out.c0 = x.c0;
    for (k, c) in keys_of(x) {
        out = out.add(&kappa_key(x.g, k).scale(c));
    }
    out.reduce()
}

/// Stacking product on label-colored diagrams, truncated in degree 2:
/// glue subsets of plus-legs of `x` to minus-legs of `y` of the same index.
pub fn star_lpm(x: &DiagElem, y: &DiagElem) -> DiagElem {
    star_impl(x, y, |g, s0, s1| {
        // s0 a plus slot of x, s1 the matching minus slot of y
        if s0 >= g && s1 + g == s0 {
            qi(1)
        } else {
            Q::zero()
        }
    })
}

/// Stacking product on `H`-colored diagrams: any leg of `x` may glue to any
/// leg of `y` with weight `½ ω(color_x, color_y)`.
pub fn star_h(x: &DiagElem, y: &DiagElem) -> DiagElem {
    star_impl(x, y, |g, s0, s1| q(omega_idx(g, s0, s1), 2))
}

fn star_impl(x: &DiagElem, y: &DiagElem, weight: fn(usize, usize, usize) -> Q) -> DiagElem {
    let g = x.g;
    assert_eq!(g, y.g);
    let mut out = x.scale(y.c0).add(&y.scale(x.c0));
    out.c0 = x.c0 * y.c0;
    // only degree-1 times degree-1 survives the degree-2 truncation
    for (&t0, &c0) in &x.y.0 {
        for (&t1, &c1) in &y.y.0 {
            let base = RDiag {
                verts: vec![
                    [
                        Half::Leg { slot: t0[0], height: 0 },
                        Half::Leg { slot: t0[1], height: 1 },
                        Half::Leg { slot: t0[2], height: 2 },
                    ],
                    [
                        Half::Leg { slot: t1[0], height: 3 },
                        Half::Leg { slot: t1[1], height: 4 },
                        Half::Leg { slot: t1[2], height: 5 },
                    ],
                ],
                coeff: c0 * c1,
            };
            // partial matchings between legs of the first and second vertex
            let mut stack = vec![(base, 0usize)];
            let mut acc = DiagElem::zero(g);
            while let Some((d, next)) = stack.pop() {
                if next == 3 {
                    canonicalize(&d, &mut acc);
                    continue;
                }
                stack.push((d.clone(), next + 1));
                if let Half::Leg { slot: s0, .. } = d.verts[0][next] {
                    for p1 in 0..3 {
                        if let Half::Leg { slot: s1, .. } = d.verts[1][p1] {
                            let w = weight(g, s0, s1);
                            if !w.is_zero() {
                                let mut dd = d.clone();
                                let fresh = 3000 + next * 4 + p1;
                                dd.verts[0][next] = Half::Edge(fresh);
                                dd.verts[1][p1] = Half::Edge(fresh);
                                dd.coeff = dd.coeff * w;
                                stack.push((dd, next + 1));
                            }
                        }
                    }
                }
            }
            out = out.add(&acc);
        }
    }
    out.reduce()
}

#[derive(Error, Debug, PartialEq, Eq)]
#[error("no loop-degree {l} component in internal degree {i}")]
pub struct GradingError {
    pub i: usize,
    pub l: usize,
}

/// Projection onto the internal-degree-`i`, loop-degree-`l` component.
pub fn p_il(x: &DiagElem, i: usize, l: usize) -> Result<DiagElem, GradingError> {
    let mut out = DiagElem::zero(x.g);
    match (i, l) {
        (0, 0) => out.c0 = x.c0,
        (1, 0) => out.y = x.y.clone(),
        (2, 0) => {
            out.h = x.h.clone();
            out.yy = x.yy.clone();
        }
        (2, 1) => out.phi = x.phi.clone(),
        (2, 2) => out.theta = x.theta,
        _ => return Err(GradingError { i, l }),
    }
    Ok(out)
}

/// `Φ_Θ`: `Φ(a,b) -> <a,b>·Θ` under the symmetric pairing.
pub fn phi_theta(phi: &Sym2, g: usize) -> Q {
    phi.0.iter().map(|(&(i, j), &c)| c * qi(pairing_idx(g, i, j))).sum()
}

fn h_key_tuple(k: &PairKey) -> ([usize; 4], Q) {
    let ((a, b), (c, d)) = *k;
    ([a, b, c, d], if k.0 == k.1 { q(1, 2) } else { qi(1) })
}

/// `H_Θ`: `H(a,b|c,d) -> (<a,d><b,c> − <a,c><b,d>)·Θ`.
pub fn h_theta(h: &SymPair, g: usize) -> Q {
    let p = |i: usize, j: usize| qi(pairing_idx(g, i, j));
    h.0.iter()
        .map(|(k, &co)| {
            let ([a, b, c, d], f) = h_key_tuple(k);
            co * f * (p(a, d) * p(b, c) - p(a, c) * p(b, d))
        })
        .sum()
}

/// `H_Φ`: `H(a,b|c,d) -> <a,d>Φ(b,c) + <b,c>Φ(a,d) − <a,c>Φ(b,d) − <b,d>Φ(a,c)`.
pub fn h_phi(h: &SymPair, g: usize) -> Sym2 {
    let p = |i: usize, j: usize| qi(pairing_idx(g, i, j));
    let mut out = Sym2::new();
    let mut add = |i: usize, j: usize, c: Q| {
        let k = if i <= j { (i, j) } else { (j, i) };
        out.term(k, c);
    };
    for (k, &co) in &h.0 {
        let ([a, b, c, d], f) = h_key_tuple(k);
        add(b, c, co * f * p(a, d));
        add(a, d, co * f * p(b, c));
        add(b, d, -co * f * p(a, c));
        add(a, c, -co * f * p(b, d));
    }
    out
}

/// Quadratic contraction of the H block against the intersection form:
/// `H(x₁,x₂|x₃,x₄) -> −4ω(x₁,x₂)ω(x₃,x₄) − 2ω(x₁,x₃)ω(x₂,x₄) + 2ω(x₁,x₄)ω(x₂,x₃)`.
pub fn d_bar_prime(h: &SymPair, g: usize) -> Q {
    let w = |i: usize, j: usize| qi(omega_idx(g, i, j));
    h.0.iter()
        .map(|(k, &co)| {
            let ([a, b, c, d], f) = h_key_tuple(k);
            co * f
                * (-qi(4) * w(a, b) * w(c, d) - qi(2) * w(a, c) * w(b, d)
                    + qi(2) * w(a, d) * w(b, c))
        })
        .sum()
}

/// Degree-2 commutator of two `Λ³` classes under the ordered stacking:
/// one Y stacked fully below the other, minus the reverse stacking.
pub fn bracket_lambda3(t1: &W3, t2: &W3, g: usize) -> DiagElem {
    static CACHE: Lazy<Mutex<HashMap<(usize, Triple, Triple), DiagElem>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    let mut out = DiagElem::zero(g);
    for (&k1, &c1) in &t1.0 {
        for (&k2, &c2) in &t2.0 {
            let cached = CACHE.lock().unwrap().get(&(g, k1, k2)).cloned();
            let val = match cached {
                Some(v) => v,
                None => {
                    let stack = |lo: Triple, hi: Triple| {
                        let mut acc = DiagElem::zero(g);
                        let leg = |s: usize, h: i64| Half::Leg { slot: s, height: h };
                        let d = RDiag {
                            verts: vec![
                                [leg(lo[0], 0), leg(lo[1], 1), leg(lo[2], 2)],
                                [leg(hi[0], 3), leg(hi[1], 4), leg(hi[2], 5)],
                            ],
                            coeff: qi(1),
                        };
                        reduce_ordered(&d, g, &mut acc);
                        acc
                    };
                    let v = stack(k1, k2).sub(&stack(k2, k1)).reduce();
                    CACHE.lock().unwrap().insert((g, k1, k2), v.clone());
                    v
                }
            };
            out = out.add(&val.scale(c1 * c2));
        }
    }
    out.reduce()
}

/// Expected value of `chi_inv` on `hob_ordered(a,b,c,d)`: the unordered
/// graph `H(b,c|d,a)` plus intersection-form corrections in lower loop
/// degrees. Used both to calibrate `hob_ordered` and by the verification
/// suites.
pub fn hob_display(ca: &HClass, cb: &HClass, cc: &HClass, cd: &HClass, g: usize) -> DiagElem {
    let w = |x: &HClass, y: &HClass| crate::symplectic::omega(x, y);
    let mut out = DiagElem::zero(g);
    out.h = d2_reduce(&sym_arrow(&wedge2(cb, cc), &wedge2(cd, ca)), g);
    out.theta = q(w(ca, cb) * w(cc, cd) - w(ca, cc) * w(cb, cd), 4);
    out.phi = sym2(cc, cd)
        .scale(q(w(ca, cb), 2))
        .add(&sym2(cb, cd).scale(-q(w(ca, cc), 2)))
        .add(&sym2(ca, cb).scale(q(w(cc, cd), 2)))
        .add(&sym2(ca, cc).scale(-q(w(cb, cd), 2)));
    out
}

fn hob_slots(sa: usize, sb: usize, sc: usize, sd: usize, mode: u8, coeff: Q) -> RDiag {
    // internal vertices pairing {b,c} and {d,a}; mode 1 reads the pictured
    // leg order top-to-bottom instead of bottom-to-top
    let hts: [i64; 4] = if mode == 0 { [0, 1, 2, 3] } else { [3, 2, 1, 0] };
    let leg = |s: usize, h: i64| Half::Leg { slot: s, height: h };
    let v1 = [leg(sb, hts[1]), leg(sc, hts[2]), Half::Edge(0)];
    let v2 = [leg(sd, hts[3]), leg(sa, hts[0]), Half::Edge(0)];
    RDiag { verts: vec![v1, v2], coeff }
}

fn hob_mode() -> u8 {
    // the cyclic orientation and reading direction of the pictured ordered
    // H graph are pinned by matching chi_inv against the displayed values
    static MODE: Lazy<u8> = Lazy::new(|| {
        let g = 2;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rand_h = |rng: &mut rand_chacha::ChaCha8Rng| {
            HClass((0..2 * g).map(|_| rng.gen_range(-2i64..=2)).collect())
        };
        let mut ok = [true; 2];
        for _ in 0..4 {
            let (ca, cb, cc, cd) =
                (rand_h(&mut rng), rand_h(&mut rng), rand_h(&mut rng), rand_h(&mut rng));
            let expect = hob_display(&ca, &cb, &cc, &cd, g).reduce();
            for mode in 0..2u8 {
                if chi_inv(&hob_raw(&ca, &cb, &cc, &cd, g, mode)) != expect {
                    ok[mode as usize] = false;
                }
            }
        }
        let hits: Vec<u8> = (0..2).filter(|&m| ok[m as usize]).collect();
        assert_eq!(hits.len(), 1, "exactly one reading must match the display, got {hits:?}");
        hits[0]
    });
    *MODE
}

fn hob_raw(ca: &HClass, cb: &HClass, cc: &HClass, cd: &HClass, g: usize, mode: u8) -> DiagElem {
    let term = DiagTerm {
        shape: Shape::Hgraph,
        legs: vec![ca, cb, cc, cd].into_iter().cloned().map(Color::H).collect(),
        coeff: qi(1),
    };
    let mut out = DiagElem::zero(g);
    for (slots, c) in expand_legs(&term, g).unwrap() {
        reduce_ordered(&hob_slots(slots[0], slots[1], slots[2], slots[3], mode, c), g, &mut out);
    }
    out.reduce()
}

/// The pictured ordered H graph with legs `a,b,c,d` from bottom to top and
/// internal vertices joining `{b,c}` and `{d,a}`, in ordered coordinates.
pub fn hob_ordered(ca: &HClass, cb: &HClass, cc: &HClass, cd: &HClass, g: usize) -> DiagElem {
    hob_raw(ca, cb, cc, cd, g, hob_mode())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::{embed_lambda4, w2_basis, w4_basis, W4};
    use crate::symplectic::omega;
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
    fn term(shape: Shape, legs: Vec<HClass>, coeff: Q) -> DiagTerm {
        DiagTerm { shape, legs: legs.into_iter().map(Color::H).collect(), coeff }
    }

    #[test]
    fn unordered_examples() {
        let g = 2;
        // AS: repeated Y legs die
        let x = normalize_unordered(
            &[term(Shape::Y, vec![a(g, 1), b(g, 1), a(g, 1)], qi(1))],
            g,
        )
        .unwrap();
        assert!(x.is_zero());
        // IHX: the three pairings of four legs sum to zero
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let (p, q2, r, s) =
                (rand_h(g, &mut rng), rand_h(g, &mut rng), rand_h(g, &mut rng), rand_h(g, &mut rng));
            let x = normalize_unordered(
                &[
                    term(Shape::Hgraph, vec![p.clone(), q2.clone(), r.clone(), s.clone()], qi(1)),
                    term(Shape::Hgraph, vec![p.clone(), r.clone(), s.clone(), q2.clone()], qi(1)),
                    term(Shape::Hgraph, vec![p.clone(), s.clone(), q2.clone(), r.clone()], qi(1)),
                ],
                g,
            )
            .unwrap();
            assert!(x.is_zero());
        }
        // multilinearity on Φ
        let x = normalize_unordered(
            &[term(Shape::Phi, vec![a(g, 1), b(g, 1).scale(2)], qi(1))],
            g,
        )
        .unwrap();
        assert_eq!(x.phi, sym2(&a(g, 1), &b(g, 1)).scale(qi(2)));
        // leg count errors
        assert!(normalize_unordered(&[term(Shape::Y, vec![a(g, 1)], qi(1))], g).is_err());
    }

    #[test]
    fn hgraph_matches_sym_arrow() {
        let g = 2;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10 {
            let (p, q2, r, s) =
                (rand_h(g, &mut rng), rand_h(g, &mut rng), rand_h(g, &mut rng), rand_h(g, &mut rng));
            let x = normalize_unordered(
                &[term(Shape::Hgraph, vec![p.clone(), q2.clone(), r.clone(), s.clone()], qi(1))],
                g,
            )
            .unwrap();
            let expect = d2_reduce(&sym_arrow(&wedge2(&p, &q2), &wedge2(&r, &s)), g);
            assert_eq!(x.h, expect);
        }
    }

    #[test]
    fn ordered_identity_on_sorted() {
        let g = 2;
        // already ordered basis diagrams normalize to themselves
        let x = normalize_ordered(
            &[term(Shape::Phi, vec![a(g, 1), b(g, 2)], qi(1))],
            g,
        )
        .unwrap();
        let mut expect = DiagElem::zero(g);
        expect.phi.term((0, 3), qi(1));
        assert_eq!(x, expect);
        let x = normalize_ordered(
            &[term(Shape::Y, vec![a(g, 1), a(g, 2), b(g, 1)], qi(1))],
            g,
        )
        .unwrap();
        let mut expect = DiagElem::zero(g);
        expect.y.term([0, 1, 2], qi(1));
        assert_eq!(x, expect);
    }

    #[test]
    fn chi_inv_phi_display() {
        // χ⁻¹(ordered Φ(x, y)) = Φ(x,y) + ½ω(x,y)Θ
        let g = 2;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for _ in 0..12 {
            let x = rand_h(g, &mut rng);
            let y = rand_h(g, &mut rng);
            let ord = normalize_ordered(&[term(Shape::Phi, vec![x.clone(), y.clone()], qi(1))], g)
                .unwrap();
            let got = chi_inv(&ord);
            let mut expect = DiagElem::zero(g);
            expect.phi = sym2(&x, &y);
            expect.theta = q(omega(&x, &y), 2);
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn chi_inv_h_display() {
        // χ⁻¹ of the pictured ordered H graph with legs a<b<c<d equals
        // H(b,c|d,a) + ¼(ω(a,b)ω(c,d) − ω(a,c)ω(b,d))Θ
        //   + ½(ω(a,b)Φ(c,d) − ω(a,c)Φ(b,d) + ω(c,d)Φ(a,b) − ω(b,d)Φ(a,c))
        let g = 2;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        for _ in 0..8 {
            let (ca, cb, cc, cd) =
                (rand_h(g, &mut rng), rand_h(g, &mut rng), rand_h(g, &mut rng), rand_h(g, &mut rng));
            let got = chi_inv(&hob_ordered(&ca, &cb, &cc, &cd, g));
            let expect = hob_display(&ca, &cb, &cc, &cd, g).reduce();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn chi_theta_trivial() {
        let g = 1;
        let mut x = DiagElem::zero(g);
        x.theta = qi(1);
        assert_eq!(chi(&x), x);
        assert_eq!(chi_inv(&x), x);
    }

    #[test]
    fn chi_round_trip_random() {
        let g = 2;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(59);
        for _ in 0..5 {
            let mut x = DiagElem::zero(g);
            for _ in 0..3 {
                let t: Vec<usize> = {
                    let mut v: Vec<usize> = (0..2 * g).collect();
                    for i in (1..v.len()).rev() {
                        v.swap(i, rng.gen_range(0..=i));
                    }
                    v.truncate(3);
                    v.sort();
                    v
                };
                x.y.term([t[0], t[1], t[2]], qi(rng.gen_range(-2i64..=2)));
                x.term_yy([0, 1, 2], [t[0], t[1], t[2]], qi(rng.gen_range(-2i64..=2)));
                x.phi.term((rng.gen_range(0..2 * g).min(1), rng.gen_range(2..2 * g)), qi(1));
                x.theta += qi(rng.gen_range(-1i64..=1));
            }
            x = x.reduce();
            assert_eq!(chi_inv(&chi(&x)), x);
            assert_eq!(chi(&chi_inv(&x)), x);
        }
    }

    #[test]
    fn kappa_closed_forms() {
        let g = 2;
        // κ(Θ) = −Θ
        let mut th = DiagElem::zero(g);
        th.theta = qi(1);
        assert_eq!(kappa(&th), th.scale(-qi(1)));
        // κ(Φ(a,b)) = Φ(a,b) + ½ <a,b> Θ on label colors
        for i in 0..2 * g {
            for j in i..2 * g {
                let mut x = DiagElem::zero(g);
                x.phi.term((i, j), qi(1));
                let got = kappa(&x);
                let mut expect = x.clone();
                expect.theta = q(pairing_idx(g, i, j), 2);
                assert_eq!(got, expect, "phi {i} {j}");
            }
        }
        // κ(H(a,b|c,d)) = −H − ½H_Φ(H) − ¼H_Θ(H) on label colors
        let ps = w2_basis(g);
        for (pi, &p) in ps.iter().enumerate() {
            for &pq in &ps[pi..] {
                let mut x = DiagElem::zero(g);
                x.h.term((p, pq), qi(1));
                x = x.reduce();
                let got = kappa(&x);
                let mut expect = x.scale(-qi(1));
                expect.phi = h_phi(&x.h, g).scale(-q(1, 2));
                expect.theta = -h_theta(&x.h, g) / qi(4);
                assert_eq!(got, expect.reduce(), "h {p:?} {pq:?}");
            }
        }
    }

    #[test]
    fn kappa_equals_chi_inv_s_phi() {
        for g in 1..=2usize {
            let mut keys: Vec<Key> = vec![Key::Theta];
            let n = 2 * g;
            for i in 0..n {
                for j in i..n {
                    keys.push(Key::Phi((i, j)));
                }
            }
            let ps = w2_basis(g);
            for (pi, &p) in ps.iter().enumerate() {
                for &pq in &ps[pi..] {
                    keys.push(Key::H((p, pq)));
                }
            }
            let mut triples = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        triples.push([i, j, k]);
                    }
                }
            }
            for &t in &triples {
                keys.push(Key::Y(t));
            }
            for (i, &t1) in triples.iter().enumerate() {
                for &t2 in &triples[i..] {
                    keys.push(Key::YY(t1, t2));
                }
            }
            for key in keys {
                let mut x = DiagElem::zero(g);
                match key {
                    Key::Y(t) => x.y.term(t, qi(1)),
                    Key::H(k) => x.h.term(k, qi(1)),
                    Key::Phi(k) => x.phi.term(k, qi(1)),
                    Key::Theta => x.theta = qi(1),
                    Key::YY(t1, t2) => x.term_yy(t1, t2, qi(1)),
                }
                let x = x.reduce();
                assert_eq!(kappa(&x), chi_inv(&phi_s(&x)), "g={g} key={key:?}");
            }
        }
    }

    #[test]
    fn star_examples() {
        // unit law
        let g = 2;
        let mut x = DiagElem::zero(g);
        x.y.term([0, 1, 2], qi(1));
        x.phi.term((0, 3), qi(1));
        let unit = DiagElem::one(g);
        assert_eq!(star_lpm(&unit, &x), x);
        assert_eq!(star_lpm(&x, &unit), x);
        // degree-1 ⋆ degree-1 contains the disconnected part
        let mut y1 = DiagElem::zero(g);
        y1.y.term([0, 1, 2], qi(1));
        let mut y2 = DiagElem::zero(g);
        y2.y.term([1, 2, 3], qi(1));
        let st = star_lpm(&y1, &y2);
        assert_eq!(st.yy.get(&([0, 1, 2], [1, 2, 3])), Some(&qi(1)));
        // gluings appear: slot 2 = 1+ in y1, slot 0 = 1- in y2... no match here;
        // use labels that do glue: plus slot of x matching minus slot of y
        let mut y3 = DiagElem::zero(g);
        y3.y.term([0, 2, 3], qi(1)); // contains 1-,1+,2+
        let st = star_lpm(&y1, &y3); // y1 has 1+ (slot 2): glue to 1- (slot 0) of y3
        assert!(!st.h.is_zero() || !st.phi.is_zero() || !st.theta.is_zero());
        // degree-2 ⋆ degree-2 keeps only the sum via the unit parts
        let mut d2a = DiagElem::zero(g);
        d2a.theta = qi(1);
        let mut d2b = DiagElem::zero(g);
        d2b.phi.term((0, 2), qi(1));
        assert!(star_lpm(&d2a, &d2b).is_zero());
    }

    #[test]
    fn p_il_examples() {
        let g = 2;
        let mut x = DiagElem::zero(g);
        x.theta = qi(3);
        x.phi.term((0, 1), qi(2));
        x.y.term([0, 1, 2], qi(1));
        x.h.term(((0, 1), (2, 3)), qi(1));
        x.term_yy([0, 1, 2], [0, 1, 3], qi(5));
        let x = x.reduce();
        assert_eq!(p_il(&x, 2, 2).unwrap().theta, qi(3));
        let mut phionly = DiagElem::zero(g);
        phionly.phi.term((0, 1), qi(2));
        assert_eq!(p_il(&x, 2, 1).unwrap(), phionly);
        // components sum back
        let mut sum = DiagElem::zero(g);
        for (i, l) in [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)] {
            sum = sum.add(&p_il(&x, i, l).unwrap());
        }
        assert_eq!(sum, x);
        assert!(p_il(&x, 2, 3).is_err());
    }

    #[test]
    fn contraction_examples() {
        let g = 2;
        // H(α_i,β_i|α_i,β_i) -> Θ ; cross-index -> 0
        for i in 1..=g {
            let x = normalize_unordered(
                &[term(
                    Shape::Hgraph,
                    vec![a(g, i), b(g, i), a(g, i), b(g, i)],
                    qi(1),
                )],
                g,
            )
            .unwrap();
            assert_eq!(h_theta(&x.h, g), qi(1));
        }
        let x = normalize_unordered(
            &[term(Shape::Hgraph, vec![a(g, 1), b(g, 1), a(g, 2), b(g, 2)], qi(1))],
            g,
        )
        .unwrap();
        assert_eq!(h_theta(&x.h, g), qi(0));
        // Φ_Θ(Φ(α₁,β₁)) = Θ
        let x = normalize_unordered(&[term(Shape::Phi, vec![a(g, 1), b(g, 1)], qi(1))], g).unwrap();
        assert_eq!(phi_theta(&x.phi, g), qi(1));
    }

    #[test]
    fn contractions_well_defined_on_quotient() {
        // h_theta, h_phi and the quadratic contraction must kill the Λ⁴ image
        for g in 2..=3usize {
            for k in w4_basis(g) {
                let mut w = W4::new();
                w.term(k, qi(1));
                let e = embed_lambda4(&w);
                assert!(h_theta(&e, g).is_zero());
                assert!(h_phi(&e, g).is_zero());
                assert!(d_bar_prime(&e, g).is_zero());
            }
        }
    }

    #[test]
    fn stu_swap_example() {
        // two-leg swap on a Phi with colors (β₁, α₁): reordered Phi appears
        // with coefficient 1 and a Θ correction weighted by ±ω(β₁,α₁)
        let g = 1;
        let x = normalize_ordered(&[term(Shape::Phi, vec![b(g, 1), a(g, 1)], qi(1))], g).unwrap();
        let mut sorted = DiagElem::zero(g);
        sorted.phi.term((0, 1), qi(1));
        let diff = x.sub(&sorted);
        assert!(diff.y.is_zero() && diff.h.is_zero() && diff.phi.is_zero());
        assert_eq!(num_traits::Signed::abs(&diff.theta), qi(1));
    }
}
