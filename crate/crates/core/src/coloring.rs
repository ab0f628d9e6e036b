//! Coloring matrices, link determinants and Fox n-colorability.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::diagram::{Arc, LinkDiagram};
use crate::error::{Error, Result};

/// One row per crossing and one column per color, where a color is a
/// maximal over-strand (arcs joined through over-passages) or a free loop.
/// Zero rows pad the matrix to a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringMatrix {
    entries: Vec<Vec<i64>>,
    crossings: usize,
}

impl ColoringMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Rows that come from crossings (the rest are padding).
    pub fn crossing_rows(&self) -> usize {
        self.crossings
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn minor(&self, row: usize, col: usize) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != row)
            .map(|(_, r)| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect()
    }

    /// |det| of the minor with `row` and `col` deleted.
    pub fn minor_determinant(&self, row: usize, col: usize) -> BigInt {
        bareiss(&self.minor(row, col)).abs()
    }
}

fn colors(d: &LinkDiagram) -> (Vec<usize>, usize) {
    let arcs = d.arcs();
    let index = |a: Arc| arcs.binary_search(&a).expect("arc of the diagram");
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for c in d.crossings() {
        let (x, y) = (find(&mut parent, index(c[1])), find(&mut parent, index(c[3])));
        parent[x.max(y)] = x.min(y);
    }
    let mut column = vec![usize::MAX; arcs.len()];
    let mut count = 0;
    let mut of_arc = vec![0; arcs.len()];
    for i in 0..arcs.len() {
        let r = find(&mut parent, i);
        if column[r] == usize::MAX {
            column[r] = count;
            count += 1;
        }
        of_arc[i] = column[r];
    }
    (of_arc, count + d.free_loops())
}

pub fn coloring_matrix(d: &LinkDiagram) -> Result<ColoringMatrix> {
    if !d.slots().is_empty() {
        return Err(Error::UnfilledSlot(d.slots().len()));
    }
    let (of_arc, ncolors) = colors(d);
    let arcs = d.arcs();
    let col = |a: Arc| of_arc[arcs.binary_search(&a).expect("arc")];
    let mut entries = vec![vec![0i64; ncolors]; ncolors];
    for (i, c) in d.crossings().iter().enumerate() {
        entries[i][col(c[1])] += 2;
        entries[i][col(c[0])] -= 1;
        entries[i][col(c[2])] -= 1;
    }
    Ok(ColoringMatrix { entries, crossings: d.crossing_count() })
}

/// Fraction-free Gaussian elimination; the 0×0 determinant is 1.
pub fn bareiss(m: &[Vec<i64>]) -> BigInt {
    let small: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_i128(small) {
        Some(v) => BigInt::from(v),
        None => bareiss_big(m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()),
    }
}

fn pivot<T: Zero>(m: &mut [Vec<T>], k: usize) -> Option<bool> {
    let r = (k..m.len()).find(|&r| !m[r][k].is_zero())?;
    if r != k {
        m.swap(r, k);
        return Some(true);
    }
    Some(false)
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        match pivot(&mut m, k) {
            None => return Some(0),
            Some(true) => sign = -sign,
            Some(false) => {}
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    Some(if n == 0 { 1 } else { sign * m[n - 1][n - 1] })
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        match pivot(&mut m, k) {
            None => return BigInt::zero(),
            Some(true) => sign = -sign,
            Some(false) => {}
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::from(1)
    } else {
        sign * &m[n - 1][n - 1]
    }
}

/// |det| of the coloring matrix with its last row and column deleted.
pub fn determinant_big(d: &LinkDiagram) -> Result<BigInt> {
    let c = coloring_matrix(d)?;
    let n = c.size();
    Ok(c.minor_determinant(n - 1, n - 1))
}

pub fn determinant(d: &LinkDiagram) -> Result<u64> {
    determinant_big(d)?.to_u64().ok_or(Error::Overflow)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Rank of an integer matrix over the field with `n` elements.
fn rank_mod(m: &[Vec<i64>], n: u64) -> usize {
    let n = n as i64;
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(n)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let inv = |x: i64| -> i64 {
        // Fermat inverse
        let (mut base, mut e, mut acc) = (x, n - 2, 1i64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % n;
            }
            base = base * base % n;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(r, rank);
        let s = inv(a[rank][c]);
        for x in a[rank].iter_mut() {
            *x = *x * s % n;
        }
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(n);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether a non-monochromatic coloring mod `n` exists, decided by the
/// dimension of the solution space (constant colorings span one dimension).
pub fn n_colorable(d: &LinkDiagram, n: u64) -> Result<bool> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    let c = coloring_matrix(d)?;
    Ok(c.size() - rank_mod(c.entries(), n) >= 2)
}

/// Colorability by the divisibility criterion.
pub fn divides_determinant(d: &LinkDiagram, n: u64) -> Result<bool> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    Ok((determinant_big(d)? % BigInt::from(n)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(pd: &str) -> u64 {
        determinant(&pd.parse().unwrap()).unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(""), 1);
        assert_eq!(det("X[1,2,2,1]"), 1);
        assert_eq!(det("X[1,4,2,3] X[3,2,4,1]"), 2);
        assert_eq!(det("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"), 3);
        assert_eq!(det("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"), 5);
        assert_eq!(det("U U"), 0);
    }

    #[test]
    fn kink_row_is_zero() {
        let m = coloring_matrix(&"X[1,2,2,1]".parse().unwrap()).unwrap();
        assert_eq!(m.entries(), &[vec![0]]);
    }

    #[test]
    fn trefoil_rows_are_permutations() {
        let m = coloring_matrix(&"X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]".parse().unwrap()).unwrap();
        for row in m.entries() {
            let mut r = row.clone();
            r.sort();
            assert_eq!(r, vec![-1, -1, 2]);
        }
    }

    #[test]
    fn hopf_rows_sum_to_zero() {
        let m = coloring_matrix(&"X[1,4,2,3] X[3,2,4,1]".parse().unwrap()).unwrap();
        assert_eq!(m.size(), 2);
        for row in m.entries() {
            assert_eq!(row.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn colorability() {
        let trefoil: LinkDiagram = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]".parse().unwrap();
        assert!(n_colorable(&trefoil, 3).unwrap());
        assert!(!n_colorable(&trefoil, 5).unwrap());
        assert!(!n_colorable(&trefoil, 2).unwrap());
        assert!(matches!(n_colorable(&trefoil, 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn bareiss_matches_big_path() {
        let m = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(bareiss(&m), BigInt::from(4));
        let big = bareiss_big(m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
        assert_eq!(big, BigInt::from(4));
        assert_eq!(bareiss(&[]), BigInt::from(1));
    }
}
