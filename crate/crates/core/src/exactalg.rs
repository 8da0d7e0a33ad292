//! Exact rational scalars, vectors, matrices, and linear-system primitives.
//!
//! Everything downstream (enumeration, conversion, classification) is built
//! on these; no floating point appears anywhere.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type QVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let make = |p: &str, q: &str| -> Result<Rat> {
        let num: Int = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {p:?}")))?;
        let den: Int = q
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer {q:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(num, den))
    };
    match s.split_once('/') {
        Some((p, q)) => make(p, q),
        None => make(s, "1"),
    }
}

/// Renders as "p/q", or "p" when the denominator is 1.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn qvec_from_i64(v: &[i64]) -> QVec {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

pub fn vadd(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(c: &Rat, a: &[Rat]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: Vec<QVec>,
}

impl QMat {
    pub fn new(rows: Vec<QVec>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let n = first.len();
            for r in &rows {
                if r.len() != n {
                    return Err(Error::Shape("ragged rows".into()));
                }
            }
        }
        Ok(QMat { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMat {
            rows: rows.iter().map(|r| qvec_from_i64(r)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![Rat::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        QMat { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn transpose(&self) -> QMat {
        let (m, n) = (self.nrows(), self.ncols());
        let mut rows = vec![vec![Rat::zero(); m]; n];
        for i in 0..m {
            for j in 0..n {
                rows[j][i] = self.rows[i][j].clone();
            }
        }
        QMat { rows }
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Result<QVec> {
        if self.ncols() != x.len() {
            return Err(Error::Dimension {
                expected: self.ncols(),
                got: x.len(),
            });
        }
        Ok(self.rows.iter().map(|r| dot(r, x)).collect())
    }

    pub fn mul(&self, other: &QMat) -> Result<QMat> {
        if self.ncols() != other.nrows() {
            return Err(Error::Dimension {
                expected: self.ncols(),
                got: other.nrows(),
            });
        }
        let ot = other.transpose();
        let rows = self
            .rows
            .iter()
            .map(|r| ot.rows.iter().map(|c| dot(r, c)).collect())
            .collect();
        Ok(QMat { rows })
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.nrows();
        if n != self.ncols() {
            return false;
        }
        for i in 0..n {
            for j in 0..i {
                if self.rows[i][j] != self.rows[j][i] {
                    return false;
                }
            }
        }
        true
    }
}

/// Row echelon form of an augmented system, in place. Pivoting is
/// deterministic: columns left to right, first nonzero row from the top.
/// Returns the pivot (row, col) list.
fn echelon(rows: &mut [QVec], ncols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == rows.len() {
            break;
        }
        let Some(p) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for x in rows[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[row].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, p) in r.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    pivots
}

/// Solves A·x = b exactly. Returns `None` when inconsistent. With a positive-
/// dimensional solution space, free variables are set to zero.
pub fn solve_linear(a: &QMat, b: &[Rat]) -> Result<Option<QVec>> {
    if a.nrows() != b.len() {
        return Err(Error::Dimension {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    let n = a.ncols();
    let mut aug: Vec<QVec> = a
        .rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = echelon(&mut aug, n);
    // consistency: no row 0 = nonzero
    for (i, r) in aug.iter().enumerate() {
        if pivots.iter().all(|&(pr, _)| pr != i) && !r[n].is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![Rat::zero(); n];
    for &(r, c) in &pivots {
        x[c] = aug[r][n].clone();
    }
    Ok(Some(x))
}

pub fn rank(a: &QMat) -> usize {
    let mut rows = a.rows.clone();
    echelon(&mut rows, a.ncols()).len()
}

/// Basis of the right nullspace {x : A·x = 0}, one vector per free column.
pub fn nullspace(a: &QMat) -> Vec<QVec> {
    let n = a.ncols();
    let mut rows = a.rows.clone();
    let pivots = echelon(&mut rows, n);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for &(r, c) in &pivots {
            v[c] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, or `None` if singular.
pub fn invert(a: &QMat) -> Option<QMat> {
    let n = a.nrows();
    if n != a.ncols() {
        return None;
    }
    let mut aug: Vec<QVec> = a
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend(vec![Rat::zero(); n]);
            row[n + i] = Rat::one();
            row
        })
        .collect();
    let pivots = echelon(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(QMat {
        rows: aug.into_iter().map(|r| r[n..].to_vec()).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// Classifies a symmetric matrix by symmetric (congruence) elimination with
/// diagonal pivots: every pivot positive and full rank ⇒ PD; a zero diagonal
/// entry in a nonzero row, or a negative pivot ⇒ indefinite; otherwise PSD.
pub fn definiteness(m: &QMat) -> Result<Definiteness> {
    if !m.is_symmetric() {
        return Err(Error::Shape("definiteness needs a symmetric matrix".into()));
    }
    let n = m.nrows();
    let mut s = m.rows.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = 0usize;
    loop {
        // find a nonzero diagonal pivot among active indices
        let mut piv = None;
        let mut any_nonzero = false;
        for &i in &active {
            for &j in &active {
                if !s[i][j].is_zero() {
                    any_nonzero = true;
                }
            }
            if piv.is_none() && !s[i][i].is_zero() {
                piv = Some(i);
            }
        }
        match piv {
            None => {
                if any_nonzero {
                    // symmetric, all-zero diagonal, nonzero off-diagonal:
                    // a 2×2 principal block [[0,a],[a,0]] is indefinite
                    return Ok(Definiteness::Indefinite);
                }
                return Ok(if pivots == n {
                    Definiteness::PositiveDefinite
                } else {
                    Definiteness::PositiveSemidefinite
                });
            }
            Some(p) => {
                let d = s[p][p].clone();
                if d.is_negative() {
                    return Ok(Definiteness::Indefinite);
                }
                pivots += 1;
                let col: Vec<(usize, Rat)> = active
                    .iter()
                    .filter(|&&i| i != p && !s[i][p].is_zero())
                    .map(|&i| (i, s[i][p].clone()))
                    .collect();
                for &(i, ref ci) in &col {
                    let f = ci / &d;
                    for &(j, ref cj) in &col {
                        let t = &f * cj;
                        s[i][j] -= &t;
                    }
                    s[i][p] = Rat::zero();
                    s[p][i] = Rat::zero();
                }
                active.retain(|&i| i != p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rat("8/3").unwrap(), frac(8, 3));
        assert_eq!(parse_rat("-5").unwrap(), rat(-5));
        assert_eq!(rat_str(&frac(8, 3)), "8/3");
        assert_eq!(rat_str(&frac(4, 2)), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn solve_identity() {
        let a = QMat::identity(3);
        let b = qvec_from_i64(&[1, 2, 3]);
        assert_eq!(solve_linear(&a, &b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_symmetric_2x2() {
        let a = QMat::from_i64(&[&[1, 1], &[1, -1]]);
        let b = qvec_from_i64(&[2, 0]);
        assert_eq!(
            solve_linear(&a, &b).unwrap().unwrap(),
            qvec_from_i64(&[1, 1])
        );
    }

    #[test]
    fn solve_inconsistent() {
        let a = QMat::from_i64(&[&[1, 1], &[2, 2]]);
        let b = qvec_from_i64(&[1, 3]);
        assert_eq!(solve_linear(&a, &b).unwrap(), None);
    }

    #[test]
    fn solve_underdetermined_sets_free_vars_to_zero() {
        let a = QMat::from_i64(&[&[1, 1]]);
        let b = qvec_from_i64(&[5]);
        assert_eq!(
            solve_linear(&a, &b).unwrap().unwrap(),
            qvec_from_i64(&[5, 0])
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMat::identity(4)), 4);
        assert_eq!(rank(&QMat::from_i64(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&QMat::from_i64(&[&[1, -1], &[-1, 1]])), 1);
    }

    #[test]
    fn definiteness_examples() {
        let a2 = QMat::new(vec![
            vec![rat(1), frac(-1, 2)],
            vec![frac(-1, 2), rat(1)],
        ])
        .unwrap();
        assert_eq!(definiteness(&a2).unwrap(), Definiteness::PositiveDefinite);
        let affine = QMat::from_i64(&[&[1, -1], &[-1, 1]]);
        assert_eq!(
            definiteness(&affine).unwrap(),
            Definiteness::PositiveSemidefinite
        );
        let ind = QMat::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(definiteness(&ind).unwrap(), Definiteness::Indefinite);
        let nonsym = QMat::from_i64(&[&[0, 1], &[2, 0]]);
        assert!(definiteness(&nonsym).is_err());
    }

    #[test]
    fn nullspace_and_invert() {
        let a = QMat::from_i64(&[&[1, 1], &[2, 2]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&ns[0]).unwrap()));
        let m = QMat::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = invert(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), QMat::identity(2));
        assert!(invert(&a).is_none());
    }
}
