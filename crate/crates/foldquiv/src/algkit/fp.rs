//! Arithmetic and dense linear algebra over a prime field.

/// A prime field of characteristic `p`, elements `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    /// Panics unless `p` is prime.
    pub fn new(p: u64) -> Fp {
        assert!(is_prime(p), "{p} is not prime");
        Fp { p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "division by zero");
        self.pow(a, self.p - 2)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense matrix over a prime field (row major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    pub field: Fp,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl FpMat {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> FpMat {
        FpMat { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> FpMat {
        let mut m = FpMat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Fp, rows: Vec<Vec<u64>>) -> FpMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        let data = rows.into_iter().flatten().map(|x| x % field.p).collect();
        FpMat { field, rows: r, cols: c, data }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FpMat {
        let mut t = FpMat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        FpMat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        FpMat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: u64) -> FpMat {
        let data = self.data.iter().map(|&a| self.field.mul(a, s)).collect();
        FpMat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn matmul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let f = self.field;
        let mut out = FpMat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = self.field.add(acc, self.field.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> FpMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = FpMat::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            base = base.matmul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form and the pivot column indices.
    pub fn rref(&self) -> (FpMat, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                let (a, b) = (m.get(r, j), m.get(pr, j));
                m.set(r, j, b);
                m.set(pr, j, a);
            }
            let inv = f.inv(m.get(r, c));
            for j in 0..m.cols {
                m.set(r, j, f.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let s = m.get(i, c);
                    for j in 0..m.cols {
                        let v = f.sub(m.get(i, j), f.mul(s, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the null space (as column vectors).
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u64; self.cols];
                v[fc] = 1;
                for (pi, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(pi, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<FpMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FpMat::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = FpMat::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Solves `self * x = b` for each column of `b`; `None` if inconsistent.
    pub fn solve(&self, b: &FpMat) -> Option<FpMat> {
        assert_eq!(self.rows, b.rows);
        let n = self.cols;
        let mut aug = FpMat::zeros(self.field, self.rows, n + b.cols);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            for j in 0..b.cols {
                aug.set(i, n + j, b.get(i, j));
            }
        }
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = FpMat::zeros(self.field, n, b.cols);
        for (pi, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(pi, n + j));
            }
        }
        Some(x)
    }
}

/// An incrementally built row space, for span/membership bookkeeping.
#[derive(Debug, Clone)]
pub struct RowSpace {
    field: Fp,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: Fp, ncols: usize) -> RowSpace {
        RowSpace { field, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Residue of `v` after reduction by the current basis.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut w: Vec<u64> = v.iter().map(|&x| x % f.p).collect();
        for (row, &pc) in self.rows.iter().zip(self.pivots.iter()) {
            if w[pc] != 0 {
                let s = w[pc];
                for j in 0..self.ncols {
                    w[j] = f.sub(w[j], f.mul(s, row[j]));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let f = self.field;
        let mut w = self.reduce(v);
        let Some(pc) = (0..self.ncols).find(|&j| w[j] != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // Back-substitute into existing rows to keep the basis reduced.
        for row in self.rows.iter_mut() {
            if row[pc] != 0 {
                let s = row[pc];
                for j in 0..self.ncols {
                    row[j] = f.sub(row[j], f.mul(s, w[j]));
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > pc).unwrap_or(self.rows.len());
        self.rows.insert(at, w);
        self.pivots.insert(at, pc);
        true
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let f = Fp::new(7);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.pow(3, 6), 1);
    }

    #[test]
    #[should_panic]
    fn composite_characteristic_rejected() {
        Fp::new(6);
    }

    #[test]
    fn rref_and_rank() {
        let f = Fp::new(5);
        let m = FpMat::from_rows(f, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Fp::new(2);
        let m = FpMat::from_rows(f, vec![vec![1, 1], vec![0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), FpMat::identity(f, 2));
        let sing = FpMat::from_rows(f, vec![vec![1, 1], vec![1, 1]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_not() {
        let f = Fp::new(3);
        let a = FpMat::from_rows(f, vec![vec![1, 0], vec![0, 0]]);
        let b = FpMat::from_rows(f, vec![vec![2], vec![0]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.matmul(&x), b);
        let bad = FpMat::from_rows(f, vec![vec![0], vec![1]]);
        assert!(a.solve(&bad).is_none());
    }

    #[test]
    fn rowspace_insert_and_membership() {
        let f = Fp::new(2);
        let mut s = RowSpace::new(f, 3);
        assert!(s.insert(&[1, 1, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 0, 1]));
        assert!(s.contains(&[1, 0, 1]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.dim(), 2);
    }
}
