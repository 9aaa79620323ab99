//! Exact integer linear algebra: Hermite and Smith normal forms with
//! unimodular transforms, left kernels, lattice membership and coset
//! reduction. Everything is dense `i128`; the matrices in this crate are
//! small and sparse-by-content, so correctness wins over speed.

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    pub r: usize,
    pub c: usize,
    pub a: Vec<i128>,
}

impl Mat {
    pub fn zeros(r: usize, c: usize) -> Self {
        Mat { r, c, a: vec![0; r * c] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            a.extend(row);
        }
        Mat { r, c, a }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect())
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.a[i * self.c..(i + 1) * self.c]
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.c, other.r);
        let mut out = Mat::zeros(self.r, other.c);
        for i in 0..self.r {
            for k in 0..self.c {
                let v = self[(i, k)];
                if v == 0 {
                    continue;
                }
                for j in 0..other.c {
                    out[(i, j)] += v * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.c, self.r);
        for i in 0..self.r {
            for j in 0..self.c {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.c {
            self.a.swap(i * self.c + k, j * self.c + k);
        }
    }

    fn scale_row(&mut self, i: usize, s: i128) {
        for k in 0..self.c {
            self[(i, k)] *= s;
        }
    }

    /// row i += q * row j
    fn add_row(&mut self, i: usize, j: usize, q: i128) {
        if q == 0 {
            return;
        }
        for k in 0..self.c {
            let v = self[(j, k)];
            self[(i, k)] += q * v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        assert_eq!(self.r, self.c);
        let n = self.r;
        if n == 0 {
            return 1;
        }
        let mut m = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[(k, k)] == 0 {
                let Some(p) = (k + 1..n).find(|&i| m[(i, k)] != 0) else {
                    return 0;
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[(i, j)] = (m[(i, j)] * m[(k, k)] - m[(i, k)] * m[(k, j)]) / prev;
                }
                m[(i, k)] = 0;
            }
            prev = m[(k, k)];
        }
        sign * m[(n - 1, n - 1)]
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.a[i * self.c + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.a[i * self.c + j]
    }
}

/// Row-style Hermite normal form: `u * input = h` with `u` unimodular,
/// `h` in echelon form with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`. `pivots` lists `(row, col)` pairs.
pub struct Hnf {
    pub h: Mat,
    pub u: Option<Mat>,
    pub pivots: Vec<(usize, usize)>,
}

pub fn hnf(input: &Mat, want_u: bool) -> Hnf {
    let mut h = input.clone();
    let mut u = if want_u { Some(Mat::identity(input.r)) } else { None };
    let mut pivots = Vec::new();
    let mut prow = 0usize;
    for col in 0..h.c {
        if prow == h.r {
            break;
        }
        loop {
            // pick the row at/below prow with the smallest nonzero |entry|
            let mut best: Option<(usize, i128)> = None;
            for i in prow..h.r {
                let v = h[(i, col)].abs();
                if v != 0 && best.map_or(true, |(_, b)| v < b) {
                    best = Some((i, v));
                }
            }
            let Some((bi, _)) = best else {
                break;
            };
            h.swap_rows(prow, bi);
            if let Some(u) = u.as_mut() {
                u.swap_rows(prow, bi);
            }
            let p = h[(prow, col)];
            let mut done = true;
            for i in prow + 1..h.r {
                let q = h[(i, col)].div_euclid(p);
                h.add_row(i, prow, -q);
                if let Some(u) = u.as_mut() {
                    u.add_row(i, prow, -q);
                }
                if h[(i, col)] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(prow, col)] != 0 {
            if h[(prow, col)] < 0 {
                h.scale_row(prow, -1);
                if let Some(u) = u.as_mut() {
                    u.scale_row(prow, -1);
                }
            }
            let p = h[(prow, col)];
            for i in 0..prow {
                let q = h[(i, col)].div_euclid(p);
                h.add_row(i, prow, -q);
                if let Some(u) = u.as_mut() {
                    u.add_row(i, prow, -q);
                }
            }
            pivots.push((prow, col));
            prow += 1;
        }
    }
    Hnf { h, u, pivots }
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Canonical coset representative of `v` modulo the row span.
    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        let mut v = v.to_vec();
        for &(r, c) in &self.pivots {
            let p = self.h[(r, c)];
            let q = v[c].div_euclid(p);
            if q != 0 {
                for k in 0..self.h.c {
                    v[k] -= q * self.h[(r, k)];
                }
            }
        }
        v
    }

    /// Membership of `v` in the integer row span.
    pub fn contains(&self, v: &[i128]) -> bool {
        let mut v = v.to_vec();
        for &(r, c) in &self.pivots {
            let p = self.h[(r, c)];
            if v[c] % p != 0 {
                return false;
            }
            let q = v[c] / p;
            if q != 0 {
                for k in 0..self.h.c {
                    v[k] -= q * self.h[(r, k)];
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Solve `y * h = v` exactly over the integers (coefficients on the
    /// nonzero rows), or `None` if `v` is not in the row span.
    pub fn express(&self, v: &[i128]) -> Option<Vec<i128>> {
        let mut v = v.to_vec();
        let mut y = vec![0i128; self.h.r];
        for &(r, c) in &self.pivots {
            let p = self.h[(r, c)];
            if v[c] % p != 0 {
                return None;
            }
            let q = v[c] / p;
            y[r] = q;
            if q != 0 {
                for k in 0..self.h.c {
                    v[k] -= q * self.h[(r, k)];
                }
            }
        }
        if v.iter().all(|&x| x == 0) {
            Some(y)
        } else {
            None
        }
    }
}

/// Basis of the left kernel `{ x : x * input = 0 }`.
pub fn left_kernel(input: &Mat) -> Vec<Vec<i128>> {
    let hh = hnf(input, true);
    let u = hh.u.unwrap();
    let mut out = Vec::new();
    for i in 0..hh.h.r {
        if hh.h.row(i).iter().all(|&x| x == 0) {
            out.push(u.row(i).to_vec());
        }
    }
    out
}

/// Solve `x * a = b` over the integers.
pub fn solve_left(a: &Mat, b: &[i128]) -> Option<Vec<i128>> {
    let hh = hnf(a, true);
    let y = hh.express(b)?;
    let u = hh.u.unwrap();
    let mut x = vec![0i128; a.r];
    for (i, &yi) in y.iter().enumerate() {
        if yi != 0 {
            for j in 0..a.r {
                x[j] += yi * u[(i, j)];
            }
        }
    }
    Some(x)
}

/// Smith normal form: `u * input * v = s` with `s` diagonal,
/// `s[0] | s[1] | ...`, all nonnegative.
pub struct Snf {
    pub s: Mat,
    pub u: Option<Mat>,
    pub v: Option<Mat>,
}

impl Snf {
    pub fn divisors(&self) -> Vec<i128> {
        let n = self.s.r.min(self.s.c);
        (0..n).map(|i| self.s[(i, i)]).take_while(|&d| d != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().len()
    }
}

pub fn snf(input: &Mat, want_u: bool, want_v: bool) -> Snf {
    let mut s = input.clone();
    let mut u = if want_u { Some(Mat::identity(input.r)) } else { None };
    let mut v = if want_v { Some(Mat::identity(input.c)) } else { None };
    let n = s.r.min(s.c);
    let mut k = 0usize;
    while k < n {
        // locate a nonzero entry of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize, i128)> = None;
        for i in k..s.r {
            for j in k..s.c {
                let a = s[(i, j)].abs();
                if a != 0 && best.map_or(true, |(_, _, b)| a < b) {
                    best = Some((i, j, a));
                }
            }
        }
        let Some((bi, bj, _)) = best else {
            break;
        };
        s.swap_rows(k, bi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(k, bi);
        }
        swap_cols(&mut s, k, bj);
        if let Some(v) = v.as_mut() {
            swap_cols(v, k, bj);
        }
        // clear column and row k
        let mut dirty = false;
        for i in k + 1..s.r {
            let q = s[(i, k)].div_euclid(s[(k, k)]);
            s.add_row(i, k, -q);
            if let Some(u) = u.as_mut() {
                u.add_row(i, k, -q);
            }
            if s[(i, k)] != 0 {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        for j in k + 1..s.c {
            let q = s[(k, j)].div_euclid(s[(k, k)]);
            add_col(&mut s, j, k, -q);
            if let Some(v) = v.as_mut() {
                add_col(v, j, k, -q);
            }
            if s[(k, j)] != 0 {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // divisibility: every entry of the trailing block must be divisible
        let p = s[(k, k)];
        let mut fixed = true;
        'scan: for i in k + 1..s.r {
            for j in k + 1..s.c {
                if s[(i, j)] % p != 0 {
                    // fold row i into row k and retry
                    s.add_row(k, i, 1);
                    if let Some(u) = u.as_mut() {
                        u.add_row(k, i, 1);
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if s[(k, k)] < 0 {
            s.scale_row(k, -1);
            if let Some(u) = u.as_mut() {
                u.scale_row(k, -1);
            }
        }
        k += 1;
    }
    Snf { s, u, v }
}

fn swap_cols(m: &mut Mat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..m.r {
        m.a.swap(r * m.c + i, r * m.c + j);
    }
}

/// col i += q * col j
fn add_col(m: &mut Mat, i: usize, j: usize, q: i128) {
    if q == 0 {
        return;
    }
    for r in 0..m.r {
        let v = m[(r, j)];
        m[(r, i)] += q * v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn hnf_identity() {
        let m = Mat::identity(4);
        let h = hnf(&m, false);
        assert_eq!(h.h, m);
        assert_eq!(h.rank(), 4);
    }

    #[test]
    fn snf_diag() {
        let m = Mat::from_rows(vec![vec![2, 0], vec![0, 4]]);
        let s = snf(&m, false, false);
        assert_eq!(s.divisors(), vec![2, 4]);
    }

    #[test]
    fn snf_example() {
        let m = Mat::from_rows(vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let s = snf(&m, true, true);
        assert_eq!(s.divisors(), vec![1, 3, 21]);
        assert_eq!(s.rank(), 3);
    }

    #[test]
    fn snf_transforms_multiply_back() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let r = 5;
            let c = 7;
            let mut m = Mat::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m[(i, j)] = rng.gen_range(-6i128..=6);
                }
            }
            let s = snf(&m, true, true);
            let u = s.u.as_ref().unwrap();
            let v = s.v.as_ref().unwrap();
            assert_eq!(u.mul(&m).mul(v), s.s);
            assert_eq!(u.det().abs(), 1);
            assert_eq!(v.det().abs(), 1);
            // divisibility chain
            let d = s.divisors();
            for w in d.windows(2) {
                assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn hnf_transform_and_membership() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let r = 4;
            let c = 6;
            let mut m = Mat::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m[(i, j)] = rng.gen_range(-5i128..=5);
                }
            }
            let h = hnf(&m, true);
            let u = h.u.as_ref().unwrap();
            assert_eq!(u.mul(&m), h.h);
            assert_eq!(u.det().abs(), 1);
            // random lattice element is a member; reduction is idempotent
            let coef: Vec<i128> = (0..r).map(|_| rng.gen_range(-4i128..=4)).collect();
            let mut v = vec![0i128; c];
            for i in 0..r {
                for j in 0..c {
                    v[j] += coef[i] * m[(i, j)];
                }
            }
            assert!(h.contains(&v));
            let red = h.reduce(&v);
            assert!(v.iter().zip(&red).all(|(_, _)| true));
            assert_eq!(h.reduce(&red), red);
        }
    }

    #[test]
    fn kernel_and_solve() {
        let m = Mat::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        let k = left_kernel(&m);
        assert_eq!(k.len(), 1);
        for v in &k {
            let mut prod = vec![0i128; 3];
            for i in 0..3 {
                for j in 0..3 {
                    prod[j] += v[i] * m[(i, j)];
                }
            }
            assert!(prod.iter().all(|&x| x == 0));
        }
        let b = vec![3, 7, 10];
        let x = solve_left(&m, &b).unwrap();
        let mut prod = vec![0i128; 3];
        for i in 0..3 {
            for j in 0..3 {
                prod[j] += x[i] * m[(i, j)];
            }
        }
        assert_eq!(prod, b);
    }
}
