//! Integer helpers: prime powers, binomials, small integer matrices and
//! Hermite normal forms of full-rank lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Returns `(p, h)` with `q = p^h` and `p` prime, or `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if q % p != 0 {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub type Matrix = Vec<Vec<BigInt>>;

pub fn determinant(m: &Matrix) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = BigInt::zero();
            for col in 0..n {
                let minor = minor(m, 0, col);
                let term = &m[0][col] * determinant(&minor);
                if col % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn minor(m: &Matrix, row: usize, col: usize) -> Matrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Adjugate matrix, so that `adj(m) * m = det(m) * I`.
pub fn adjugate(m: &Matrix) -> Matrix {
    let n = m.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in adj.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let cof = determinant(&minor(m, j, i));
            *entry = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

pub fn mat_vec(m: &Matrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// A full-rank sublattice of `Z^d`, stored as an upper triangular basis
/// (column `j` is supported on rows `0..=j`) with positive diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    columns: Vec<Vec<BigInt>>,
}

impl Lattice {
    /// Builds the lattice spanned by the given columns. Returns `None` when
    /// the columns are linearly dependent.
    pub fn from_columns(columns: Vec<Vec<BigInt>>) -> Option<Self> {
        let d = columns.len();
        let mut cols = columns;
        for i in (0..d).rev() {
            for j in 0..i {
                if cols[j][i].is_zero() {
                    continue;
                }
                let a = cols[i][i].clone();
                let b = cols[j][i].clone();
                let ext = a.extended_gcd(&b);
                let (g, s, t) = (ext.gcd, ext.x, ext.y);
                let bg = &b / &g;
                let ag = &a / &g;
                let new_i: Vec<BigInt> = (0..d).map(|r| &s * &cols[i][r] + &t * &cols[j][r]).collect();
                let new_j: Vec<BigInt> = (0..d).map(|r| &bg * &cols[i][r] - &ag * &cols[j][r]).collect();
                cols[i] = new_i;
                cols[j] = new_j;
            }
            if cols[i][i].is_zero() {
                return None;
            }
            if cols[i][i].is_negative() {
                for x in cols[i].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        Some(Lattice { columns: cols })
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Index of the lattice in `Z^d`.
    pub fn index(&self) -> BigInt {
        (0..self.dim()).map(|i| self.columns[i][i].clone()).product()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.dim()).map(|i| self.columns[i][i].clone()).collect()
    }

    /// Canonical representative of `v` modulo the lattice: the unique
    /// vector congruent to `v` with `0 <= v_i < H_ii`.
    pub fn reduce(&self, v: &mut [BigInt]) {
        for i in (0..self.dim()).rev() {
            let h = &self.columns[i][i];
            let k = v[i].div_floor(h);
            if !k.is_zero() {
                for (r, x) in self.columns[i].iter().enumerate().take(i + 1) {
                    v[r] -= &k * x;
                }
            }
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// All canonical representatives, in mixed-radix order with the first
    /// coordinate varying fastest.
    pub fn representatives(&self) -> Vec<Vec<BigInt>> {
        let diag = self.diagonal();
        let mut out = vec![vec![]];
        for h in diag.iter().rev() {
            let h: u64 = h.try_into().expect("lattice index fits in u64");
            let mut next = Vec::with_capacity(out.len() * h as usize);
            for prefix in &out {
                for x in 0..h {
                    let mut v = vec![BigInt::from(x)];
                    v.extend(prefix.iter().cloned());
                    next.push(v);
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(97), Some((97, 1)));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(9, 3), BigInt::from(84));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn adjugate_inverts() {
        let m = vec![b(&[2, -2]), b(&[1, 0])];
        let adj = adjugate(&m);
        let det = determinant(&m);
        for i in 0..2 {
            for j in 0..2 {
                let e: BigInt = (0..2).map(|k| &adj[i][k] * &m[k][j]).sum();
                let expect = if i == j { det.clone() } else { BigInt::zero() };
                assert_eq!(e, expect);
            }
        }
    }

    #[test]
    fn lattice_reduction() {
        // lattice spanned by (1,1) and (-2,0): the ideal (1+i) in Z[i]-like coordinates
        let lat = Lattice::from_columns(vec![b(&[1, 1]), b(&[-2, 0])]).unwrap();
        assert_eq!(lat.index(), BigInt::from(2));
        assert!(lat.contains(&b(&[1, 1])));
        assert!(lat.contains(&b(&[2, 0])));
        assert!(!lat.contains(&b(&[1, 0])));
        assert_eq!(lat.representatives().len(), 2);
        let mut v = b(&[7, -3]);
        lat.reduce(&mut v);
        let d = lat.diagonal();
        assert!(v.iter().zip(&d).all(|(x, h)| !x.is_negative() && x < h));
    }

    #[test]
    fn dependent_columns_rejected() {
        assert!(Lattice::from_columns(vec![b(&[1, 2]), b(&[2, 4])]).is_none());
    }
}
