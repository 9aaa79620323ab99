//! The symplectic module `H = Z^{2g}` with its intersection form, the label
//! alphabet `L^±` of plus/minus colors, and mod-2 reduction.
//!
//! Coordinates are always ordered `(a_1..a_g, b_1..b_g)`: index `i < g` is the
//! meridian class `a_{i+1}`, index `g + j` is the parallel class `b_{j+1}`.
//! The label `i^-` corresponds to index `i-1` and `j^+` to index `g + j - 1`,
//! so a label and the class it maps to share one coordinate slot.

use serde::{Deserialize, Serialize};

/// Element of `H = Z^{2g}` in the fixed symplectic basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HClass(pub Vec<i64>);

impl HClass {
    pub fn zero(g: usize) -> Self {
        HClass(vec![0; 2 * g])
    }

    /// Basis vector by coordinate index (`0..2g`).
    pub fn basis(g: usize, idx: usize) -> Self {
        assert!(idx < 2 * g);
        let mut v = vec![0; 2 * g];
        v[idx] = 1;
        HClass(v)
    }

    /// Meridian basis class `a_i`, `i` in `1..=g`.
    pub fn alpha(g: usize, i: usize) -> Self {
        assert!((1..=g).contains(&i));
        Self::basis(g, i - 1)
    }

    /// Parallel basis class `b_j`, `j` in `1..=g`.
    pub fn beta(g: usize, j: usize) -> Self {
        assert!((1..=g).contains(&j));
        Self::basis(g, g + j - 1)
    }

    pub fn genus(&self) -> usize {
        self.0.len() / 2
    }

    pub fn add(&self, other: &HClass) -> HClass {
        assert_eq!(self.0.len(), other.0.len(), "genus mismatch");
        HClass(self.0.iter().zip(&other.0).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, c: i64) -> HClass {
        HClass(self.0.iter().map(|x| c * x).collect())
    }

    pub fn neg(&self) -> HClass {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// Intersection form: `omega(a_i, b_j) = delta_{ij}`, zero on pure `a`- or
/// `b`-spans; bilinear and antisymmetric.
pub fn omega(x: &HClass, y: &HClass) -> i64 {
    assert_eq!(x.0.len(), y.0.len(), "genus mismatch");
    let g = x.genus();
    (0..g).map(|i| x.0[i] * y.0[g + i] - x.0[g + i] * y.0[i]).sum()
}

/// Intersection form on coordinate indices.
pub fn omega_idx(g: usize, i: usize, j: usize) -> i64 {
    if i < g && j == i + g {
        1
    } else if j < g && i == j + g {
        -1
    } else {
        0
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Minus,
    Plus,
}

/// Label `i^+` or `i^-` with `index` in `1..=g`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LpmLabel {
    pub sign: Sign,
    pub index: usize,
}

impl LpmLabel {
    pub fn new(sign: Sign, index: usize) -> Self {
        assert!(index >= 1);
        LpmLabel { sign, index }
    }

    /// Coordinate slot of this label: `i^- -> i-1`, `j^+ -> g+j-1`.
    pub fn slot(&self, g: usize) -> usize {
        assert!(self.index <= g, "label index exceeds genus");
        match self.sign {
            Sign::Minus => self.index - 1,
            Sign::Plus => g + self.index - 1,
        }
    }

    pub fn from_slot(g: usize, slot: usize) -> Self {
        assert!(slot < 2 * g);
        if slot < g {
            LpmLabel { sign: Sign::Minus, index: slot + 1 }
        } else {
            LpmLabel { sign: Sign::Plus, index: slot - g + 1 }
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let (num, sig) = s.split_at(s.len().checked_sub(1)?);
        let index: usize = num.parse().ok()?;
        let sign = match sig {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return None,
        };
        if index == 0 {
            return None;
        }
        Some(LpmLabel { sign, index })
    }

    pub fn render(&self) -> String {
        format!("{}{}", self.index, if self.sign == Sign::Plus { "+" } else { "-" })
    }
}

/// `i^- -> a_i`, `j^+ -> b_j`.
pub fn label_to_class(g: usize, l: &LpmLabel) -> HClass {
    HClass::basis(g, l.slot(g))
}

/// Symmetric pairing on labels: `<i^+, j^-> = delta_{ij}`, zero on same-sign pairs.
pub fn pairing_lpm(x: &LpmLabel, y: &LpmLabel) -> i64 {
    if x.index == y.index && x.sign != y.sign {
        1
    } else {
        0
    }
}

/// Symmetric pairing on coordinate slots (the label pairing extended bilinearly).
pub fn pairing_idx(g: usize, i: usize, j: usize) -> i64 {
    if i < g && j == i + g || j < g && i == j + g {
        1
    } else {
        0
    }
}

/// Symmetric pairing of two coordinate vectors.
pub fn pairing(x: &HClass, y: &HClass) -> i64 {
    assert_eq!(x.0.len(), y.0.len(), "genus mismatch");
    let g = x.genus();
    (0..g).map(|i| x.0[i] * y.0[g + i] + x.0[g + i] * y.0[i]).sum()
}

/// Coordinate-wise reduction to `Z_2^{2g}`.
pub fn mod2(x: &HClass) -> Vec<u8> {
    x.0.iter().map(|&c| (c.rem_euclid(2)) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_on_basis() {
        let g = 3;
        assert_eq!(omega(&HClass::alpha(g, 1), &HClass::beta(g, 1)), 1);
        assert_eq!(omega(&HClass::beta(g, 1), &HClass::alpha(g, 1)), -1);
        assert_eq!(omega(&HClass::alpha(g, 1), &HClass::beta(g, 2)), 0);
        assert_eq!(omega(&HClass::alpha(g, 2), &HClass::alpha(g, 3)), 0);
    }

    #[test]
    fn omega_bilinear_expansion() {
        // (a1 + b2, b1 + a2) -> 1 + (-1) = 0
        let g = 2;
        let x = HClass::alpha(g, 1).add(&HClass::beta(g, 2));
        let y = HClass::beta(g, 1).add(&HClass::alpha(g, 2));
        assert_eq!(omega(&x, &y), 0);
        assert_eq!(omega(&x, &x), 0);
    }

    #[test]
    fn omega_gram_unimodular() {
        for g in 1..=4 {
            let n = 2 * g;
            // Gram matrix determinant is 1: it is the standard block form.
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = omega_idx(g, i, j);
                }
            }
            let det = crate::matrix::Mat::from_i64(&m).det();
            assert_eq!(det, 1);
        }
    }

    #[test]
    fn labels() {
        let g = 2;
        assert_eq!(label_to_class(g, &LpmLabel::parse("1-").unwrap()), HClass::alpha(g, 1));
        assert_eq!(label_to_class(g, &LpmLabel::parse("2+").unwrap()), HClass::beta(g, 2));
        let p1 = LpmLabel::parse("1+").unwrap();
        let m1 = LpmLabel::parse("1-").unwrap();
        let m2 = LpmLabel::parse("2-").unwrap();
        assert_eq!(pairing_lpm(&p1, &m1), 1);
        assert_eq!(pairing_lpm(&p1, &m2), 0);
        assert_eq!(pairing_lpm(&m1, &m1), 0);
        assert_eq!(pairing_lpm(&p1, &p1), 0);
        // pairing is symmetric on all labels
        for a in 0..2 * g {
            for b in 0..2 * g {
                let la = LpmLabel::from_slot(g, a);
                let lb = LpmLabel::from_slot(g, b);
                assert_eq!(pairing_lpm(&la, &lb), pairing_lpm(&lb, &la));
                assert_eq!(pairing_lpm(&la, &lb), pairing_idx(g, a, b));
            }
        }
    }

    #[test]
    fn mod2_reduction() {
        let g = 1;
        assert_eq!(mod2(&HClass::alpha(g, 1).scale(2)), vec![0, 0]);
        let x = HClass::alpha(g, 1).add(&HClass::beta(g, 1).scale(3));
        assert_eq!(mod2(&x), vec![1, 1]);
    }
}
