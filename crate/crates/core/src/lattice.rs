//! Lattices with exact Gram data; shortest-vector, ball, and closest-vector
//! enumeration; Voronoi-relevant vectors; the named-lattice registry.
//!
//! All enumeration runs on an LLL-reduced copy of the Gram matrix computed
//! once at construction; results are mapped back to the original basis.

use num::{One, Signed, ToPrimitive, Zero};

use crate::exactalg::{self, dot, frac, rat, Definiteness, Int, QMat, QVec, Rat};
use crate::{golay, Error, Result};

/// Which named family a lattice came from, when any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedLattice {
    Zn(usize),
    An(usize),
    Dn(usize),
    En(usize),
    LeechMOG,
}

pub struct Lattice {
    /// n×m basis rows (m = ambient dimension ≥ n, full row rank).
    pub basis: QMat,
    /// n×n Gram matrix, gram[i][j] = ⟨bᵢ,bⱼ⟩ = (Σ bᵢₖ bⱼₖ)/s.
    pub gram: QMat,
    /// Global inner-product denominator s (1 by default, 8 in the MOG frame).
    pub ip_denom: i64,
    pub name: Option<NamedLattice>,
    red: Reduced,
}

/// LLL-reduced form of the Gram matrix plus its exact Gram–Schmidt data.
struct Reduced {
    gram: QMat,
    /// unimodular U with gram_red = U·gram·Uᵀ; reduced coords x ↦ x·U original
    u: Vec<Vec<Int>>,
    u_inv: QMat,
    /// lower-triangular Gram–Schmidt coefficients of the reduced Gram
    mu: Vec<Vec<Rat>>,
    /// Gram–Schmidt squared norms, all positive
    b: Vec<Rat>,
}

/// Lattice element given by integer coefficients in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector { coords }
    }
}

/// The set of shortest nonzero vectors and their common squared norm λ².
pub struct MinSet {
    pub vectors: Vec<LatticeVector>,
    pub min_norm_sq: Rat,
}

impl MinSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient_all(&self, l: &Lattice) -> Vec<QVec> {
        self.vectors.iter().map(|v| l.ambient(&v.coords)).collect()
    }
}

fn round_rat(x: &Rat) -> Int {
    (x + frac(1, 2)).floor().to_integer()
}

fn round_rat_i64(x: &Rat) -> i64 {
    round_rat(x).to_i64().expect("coordinate out of i64 range")
}

/// Exact Gram–Schmidt data (μ lower-triangular, squared norms) of a PD Gram.
fn gso(gram: &QMat) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let n = gram.nrows();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = gram.rows[i][j].clone();
            for t in 0..j {
                s -= &mu[i][t] * &mu[j][t] * &b[t];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = gram.rows[i][i].clone();
        for t in 0..i {
            s -= &mu[i][t] * &mu[i][t] * &b[t];
        }
        b[i] = s;
    }
    (mu, b)
}

/// LLL reduction (δ = 3/4) operating on the Gram matrix alone, with
/// incrementally maintained exact Gram–Schmidt data. Returns the reduced
/// Gram and the unimodular transform U with G' = U·G·Uᵀ.
pub fn lll_gram(gram: &QMat) -> (QMat, Vec<Vec<Int>>) {
    let n = gram.nrows();
    let delta = frac(3, 4);
    let mut g = gram.rows.clone();
    let mut u: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect())
        .collect();
    let mut mu = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    b[0] = g[0][0].clone();
    if n == 1 {
        return (QMat { rows: g }, u);
    }
    let mut kmax = 0usize;

    let red = |g: &mut Vec<QVec>,
               u: &mut Vec<Vec<Int>>,
               mu: &mut Vec<Vec<Rat>>,
               k: usize,
               l: usize| {
        let q = round_rat(&mu[k][l]);
        if q.is_zero() {
            return;
        }
        let qr = Rat::from_integer(q.clone());
        for j in 0..g.len() {
            let t = &qr * &g[l][j];
            g[k][j] -= t;
        }
        for j in 0..g.len() {
            let t = &qr * &g[j][l];
            g[j][k] -= t;
        }
        for j in 0..u[k].len() {
            let t = &q * &u[l][j];
            u[k][j] -= t;
        }
        mu[k][l] -= &qr;
        for i in 0..l {
            let t = &qr * &mu[l][i];
            mu[k][i] -= t;
        }
    };

    let mut k = 1usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..k {
                let mut s = g[k][j].clone();
                for t in 0..j {
                    s -= &mu[k][t] * &mu[j][t] * &b[t];
                }
                mu[k][j] = s / &b[j];
            }
            let mut s = g[k][k].clone();
            for t in 0..k {
                s -= &mu[k][t] * &mu[k][t] * &b[t];
            }
            b[k] = s;
        }
        red(&mut g, &mut u, &mut mu, k, k - 1);
        let lovasz_rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if b[k] < lovasz_rhs {
            // swap rows/cols k-1 and k, updating μ and B in place
            g.swap(k - 1, k);
            for row in g.iter_mut() {
                row.swap(k - 1, k);
            }
            u.swap(k - 1, k);
            for j in 0..k - 1 {
                let t = mu[k][j].clone();
                mu[k][j] = mu[k - 1][j].clone();
                mu[k - 1][j] = t;
            }
            let m = mu[k][k - 1].clone();
            let bb = &b[k] + &m * &m * &b[k - 1];
            mu[k][k - 1] = &m * &b[k - 1] / &bb;
            let old_bk = b[k].clone();
            b[k] = &b[k - 1] * &old_bk / &bb;
            b[k - 1] = bb;
            for i in k + 1..=kmax {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                mu[i][k - 1] = &t + &mu[k][k - 1] * &mu[i][k];
            }
            k = std::cmp::max(k - 1, 1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                red(&mut g, &mut u, &mut mu, k, l);
            }
            k += 1;
        }
    }
    (QMat { rows: g }, u)
}

impl Lattice {
    pub fn new(basis: QMat, ip_denom: i64) -> Result<Self> {
        if ip_denom <= 0 {
            return Err(Error::Config("inner-product denominator must be positive".into()));
        }
        let n = basis.nrows();
        let m = basis.ncols();
        if n == 0 || m < n {
            return Err(Error::Shape("basis must have 1 ≤ n ≤ ambient dim rows".into()));
        }
        let s = rat(ip_denom);
        let mut gram_rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                row.push(dot(&basis.rows[i], &basis.rows[j]) / &s);
            }
            gram_rows.push(row);
        }
        let gram = QMat { rows: gram_rows };
        if exactalg::definiteness(&gram)? != Definiteness::PositiveDefinite {
            return Err(Error::Shape("basis rows are linearly dependent".into()));
        }
        let (gram_red, u) = lll_gram(&gram);
        let u_mat = QMat {
            rows: u
                .iter()
                .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
                .collect(),
        };
        let u_inv = exactalg::invert(&u_mat)
            .ok_or_else(|| Error::Internal("LLL transform not unimodular".into()))?;
        let (mu, b) = gso(&gram_red);
        Ok(Lattice {
            basis,
            gram,
            ip_denom,
            name: None,
            red: Reduced {
                gram: gram_red,
                u,
                u_inv,
                mu,
                b,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Ambient coordinates coordsᵀ·basis.
    pub fn ambient(&self, coords: &[i64]) -> QVec {
        let m = self.ambient_dim();
        let mut out = vec![Rat::zero(); m];
        for (ci, row) in coords.iter().zip(&self.basis.rows) {
            if *ci == 0 {
                continue;
            }
            let c = rat(*ci);
            for (o, x) in out.iter_mut().zip(row) {
                *o += &c * x;
            }
        }
        out
    }

    /// Ambient inner product ⟨x,y⟩ = (Σxᵢyᵢ)/s.
    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Rat {
        dot(x, y) / rat(self.ip_denom)
    }

    /// ⟨v,v⟩ for a lattice element given in basis coordinates.
    pub fn norm_sq(&self, v: &LatticeVector) -> Rat {
        let n = self.dim();
        let mut s = Rat::zero();
        for i in 0..n {
            if v.coords[i] == 0 {
                continue;
            }
            let ci = rat(v.coords[i]);
            for j in 0..n {
                if v.coords[j] != 0 {
                    s += &ci * rat(v.coords[j]) * &self.gram.rows[i][j];
                }
            }
        }
        s
    }

    /// Real basis coordinates of the orthogonal projection of an ambient
    /// point onto the lattice span, plus the squared norm of the orthogonal
    /// residue. Errors if the point's dimension mismatches.
    pub fn project(&self, x: &[Rat]) -> Result<(QVec, Rat)> {
        if x.len() != self.ambient_dim() {
            return Err(Error::Dimension {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        let s = rat(self.ip_denom);
        let rhs: QVec = self
            .basis
            .rows
            .iter()
            .map(|row| dot(row, x) / &s)
            .collect();
        let coords = exactalg::solve_linear(&self.gram, &rhs)?
            .ok_or_else(|| Error::Internal("PD Gram system must be solvable".into()))?;
        let mut orth = dot(x, x) / &s;
        for (ci, ri) in coords.iter().zip(&rhs) {
            orth -= ci * ri;
        }
        Ok((coords, orth))
    }

    /// Integer basis coordinates of an ambient point, or None when the point
    /// is not in the lattice.
    pub fn coords_of(&self, x: &[Rat]) -> Result<Option<Vec<i64>>> {
        let (coords, orth) = self.project(x)?;
        if !orth.is_zero() {
            return Ok(None);
        }
        let mut out = Vec::with_capacity(coords.len());
        for c in &coords {
            if !c.denom().is_one() {
                return Ok(None);
            }
            match c.numer().to_i64() {
                Some(v) => out.push(v),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Coordinates w.r.t. the reduced basis → original basis coordinates.
    fn from_reduced(&self, xr: &[i64]) -> Vec<i64> {
        let n = self.dim();
        let mut out = vec![Int::zero(); n];
        for (xi, urow) in xr.iter().zip(&self.red.u) {
            if *xi == 0 {
                continue;
            }
            let c = Int::from(*xi);
            for (o, uij) in out.iter_mut().zip(urow) {
                *o += &c * uij;
            }
        }
        out.into_iter()
            .map(|v| v.to_i64().expect("coordinate out of i64 range"))
            .collect()
    }

    /// Real original-basis coordinates → reduced-basis coordinates.
    fn to_reduced(&self, t: &[Rat]) -> QVec {
        // x·U = t  ⇒  x = t·U⁻¹, row-vector convention
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for (ti, row) in t.iter().zip(&self.red.u_inv.rows) {
            if ti.is_zero() {
                continue;
            }
            for (o, rij) in out.iter_mut().zip(row) {
                *o += ti * rij;
            }
        }
        out
    }

    /// Minimal Q(x − t) over reduced coordinates x, with every minimizer, by
    /// Schnorr–Euchner enumeration with a shrinking bound. Unlike
    /// `enumerate_reduced` this never materializes a large ball: the bound
    /// drops to the best value found so far as soon as it improves.
    fn closest_reduced(&self, t: &[Rat]) -> (Rat, Vec<Vec<i64>>) {
        let n = self.dim();
        let mu = &self.red.mu;
        let bb = &self.red.b;
        // start from the coordinate-wise rounding of the target
        let x0: Vec<i64> = t.iter().map(round_rat_i64).collect();
        let mut best = Rat::zero();
        for i in 0..n {
            for j in 0..n {
                let di = rat(x0[i]) - &t[i];
                let dj = rat(x0[j]) - &t[j];
                if !di.is_zero() && !dj.is_zero() {
                    best += di * dj * &self.red.gram.rows[i][j];
                }
            }
        }
        let mut minima = vec![x0];

        let mut x = vec![0i64; n];
        let mut c = vec![Rat::zero(); n];
        let mut step = vec![0i64; n];
        let mut dir = vec![1i64; n];
        let mut partial = vec![Rat::zero(); n + 1];
        let init_level = |lev: usize,
                          x: &mut Vec<i64>,
                          c: &mut Vec<Rat>,
                          step: &mut Vec<i64>,
                          dir: &mut Vec<i64>| {
            let mut ci = t[lev].clone();
            for j in lev + 1..n {
                if x[j] != 0 || !t[j].is_zero() {
                    ci -= (rat(x[j]) - &t[j]) * &mu[j][lev];
                }
            }
            let r = round_rat_i64(&ci);
            dir[lev] = if ci >= rat(r) { 1 } else { -1 };
            c[lev] = ci;
            x[lev] = r;
            step[lev] = 0;
        };
        let advance =
            |lev: usize, x: &mut Vec<i64>, c: &Vec<Rat>, step: &mut Vec<i64>, dir: &Vec<i64>| {
                step[lev] = if step[lev] == 0 {
                    dir[lev]
                } else if (step[lev] > 0) == (dir[lev] > 0) {
                    -step[lev]
                } else {
                    -step[lev] + dir[lev]
                };
                x[lev] = round_rat_i64(&c[lev]) + step[lev];
            };

        let mut lev = n - 1;
        init_level(lev, &mut x, &mut c, &mut step, &mut dir);
        loop {
            let d = rat(x[lev]) - &c[lev];
            let val = &partial[lev + 1] + &bb[lev] * &d * &d;
            if val <= best {
                if lev == 0 {
                    if val < best {
                        best = val;
                        minima.clear();
                        minima.push(x.clone());
                    } else if !minima.contains(&x) {
                        minima.push(x.clone());
                    }
                    advance(lev, &mut x, &c, &mut step, &dir);
                } else {
                    partial[lev] = val;
                    lev -= 1;
                    init_level(lev, &mut x, &mut c, &mut step, &mut dir);
                }
            } else {
                loop {
                    lev += 1;
                    if lev == n {
                        return (best, minima);
                    }
                    advance(lev, &mut x, &c, &mut step, &dir);
                    let d2 = rat(x[lev]) - &c[lev];
                    let val2 = &partial[lev + 1] + &bb[lev] * &d2 * &d2;
                    if val2 <= best {
                        partial[lev] = val2;
                        lev -= 1;
                        init_level(lev, &mut x, &mut c, &mut step, &mut dir);
                        break;
                    }
                }
            }
        }
    }

    /// All reduced-coordinate vectors x with Q(x − t) ≤ r², together with the
    /// exact value Q(x − t), by Schnorr–Euchner enumeration.
    fn enumerate_reduced(&self, t: &[Rat], r_sq: &Rat) -> Vec<(Vec<i64>, Rat)> {
        let n = self.dim();
        let mu = &self.red.mu;
        let bb = &self.red.b;
        let mut results = Vec::new();
        if r_sq.is_negative() {
            return results;
        }
        let mut x = vec![0i64; n];
        let mut c = vec![Rat::zero(); n];
        let mut step = vec![0i64; n];
        let mut dir = vec![1i64; n];
        let mut partial = vec![Rat::zero(); n + 1];

        // center at level i given x[i+1..]: cᵢ = tᵢ − Σ_{j>i} (xⱼ−tⱼ)·μⱼᵢ
        let init_level = |lev: usize,
                          x: &mut Vec<i64>,
                          c: &mut Vec<Rat>,
                          step: &mut Vec<i64>,
                          dir: &mut Vec<i64>| {
            let mut ci = t[lev].clone();
            for j in lev + 1..n {
                if x[j] != 0 || !t[j].is_zero() {
                    ci -= (rat(x[j]) - &t[j]) * &mu[j][lev];
                }
            }
            let r = round_rat_i64(&ci);
            dir[lev] = if ci >= rat(r) { 1 } else { -1 };
            c[lev] = ci;
            x[lev] = r;
            step[lev] = 0;
        };
        // zigzag 0, d, −d, 2d, −2d, … with d the direction toward the center
        let advance = |lev: usize, x: &mut Vec<i64>, c: &Vec<Rat>, step: &mut Vec<i64>, dir: &Vec<i64>| {
            step[lev] = if step[lev] == 0 {
                dir[lev]
            } else if (step[lev] > 0) == (dir[lev] > 0) {
                -step[lev]
            } else {
                -step[lev] + dir[lev]
            };
            x[lev] = round_rat_i64(&c[lev]) + step[lev];
        };

        let mut lev = n - 1;
        init_level(lev, &mut x, &mut c, &mut step, &mut dir);
        loop {
            let d = rat(x[lev]) - &c[lev];
            let val = &partial[lev + 1] + &bb[lev] * &d * &d;
            if &val <= r_sq {
                if lev == 0 {
                    results.push((x.clone(), val));
                    advance(lev, &mut x, &c, &mut step, &dir);
                } else {
                    partial[lev] = val;
                    lev -= 1;
                    init_level(lev, &mut x, &mut c, &mut step, &mut dir);
                }
            } else {
                loop {
                    lev += 1;
                    if lev == n {
                        return results;
                    }
                    advance(lev, &mut x, &c, &mut step, &dir);
                    let d2 = rat(x[lev]) - &c[lev];
                    let val2 = &partial[lev + 1] + &bb[lev] * &d2 * &d2;
                    if &val2 <= r_sq {
                        // the backtrack loop only visits levels ≥ 1, so a
                        // passing value always means descend
                        partial[lev] = val2;
                        lev -= 1;
                        init_level(lev, &mut x, &mut c, &mut step, &mut dir);
                        break;
                    }
                }
            }
        }
    }
}

/// All shortest nonzero vectors, sorted lexicographically by coordinates.
pub fn shortest_vectors(l: &Lattice) -> MinSet {
    let n = l.dim();
    let r_sq = (0..n)
        .map(|i| l.red.gram.rows[i][i].clone())
        .min()
        .expect("nonempty diagonal");
    let t = vec![Rat::zero(); n];
    let found = l.enumerate_reduced(&t, &r_sq);
    let min = found
        .iter()
        .filter(|(x, _)| x.iter().any(|&v| v != 0))
        .map(|(_, q)| q.clone())
        .min()
        .expect("a shortest vector exists");
    let mut vectors: Vec<LatticeVector> = found
        .into_iter()
        .filter(|(x, q)| *q == min && x.iter().any(|&v| v != 0))
        .map(|(x, _)| LatticeVector::new(l.from_reduced(&x)))
        .collect();
    vectors.sort();
    MinSet {
        vectors,
        min_norm_sq: min,
    }
}

/// All lattice points p with ⟨p−center, p−center⟩ ≤ r², sorted by coords.
pub fn vectors_in_ball(l: &Lattice, center: &[Rat], r_sq: &Rat) -> Result<Vec<LatticeVector>> {
    if r_sq.is_negative() {
        return Err(Error::Config("radius² must be nonnegative".into()));
    }
    let (coords, orth) = l.project(center)?;
    let eff = r_sq - &orth;
    if eff.is_negative() {
        return Ok(Vec::new());
    }
    let t = l.to_reduced(&coords);
    let mut out: Vec<LatticeVector> = l
        .enumerate_reduced(&t, &eff)
        .into_iter()
        .map(|(x, _)| LatticeVector::new(l.from_reduced(&x)))
        .collect();
    out.sort();
    Ok(out)
}

/// Minimal squared distance from an ambient point to the lattice, and all
/// lattice points attaining it (sorted by coords).
pub fn closest_vectors(l: &Lattice, x: &[Rat]) -> Result<(Rat, Vec<LatticeVector>)> {
    let (coords, orth) = l.project(x)?;
    let t = l.to_reduced(&coords);
    let (min, minima) = l.closest_reduced(&t);
    let mut points: Vec<LatticeVector> = minima
        .into_iter()
        .map(|x| LatticeVector::new(l.from_reduced(&x)))
        .collect();
    points.sort();
    points.dedup();
    Ok((min + orth, points))
}

pub const VORONOI_DIM_LIMIT: usize = 10;

/// Voronoi-relevant vectors by the coset criterion: v is relevant iff ±v are
/// the unique minima of v + 2L. Cost is 2ⁿ closest-vector calls.
pub fn voronoi_relevant_vectors(l: &Lattice) -> Result<Vec<LatticeVector>> {
    voronoi_relevant_vectors_with_limit(l, VORONOI_DIM_LIMIT)
}

pub fn voronoi_relevant_vectors_with_limit(
    l: &Lattice,
    limit: usize,
) -> Result<Vec<LatticeVector>> {
    let n = l.dim();
    if n > limit {
        return Err(Error::ResourceLimit(format!(
            "Voronoi computation needs 2^{n} cosets; limit is dim ≤ {limit}"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u64..(1 << n) {
        let coset: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
        // minimize ⟨c+2w, c+2w⟩ = 4·Q(w + c/2): closest points to −c/2
        let t: QVec = coset.iter().map(|&ci| frac(-ci, 2)).collect();
        let tr = l.to_reduced(&t);
        // radius: value at the rounded point
        let x0: Vec<i64> = tr.iter().map(round_rat_i64).collect();
        let mut r0 = Rat::zero();
        let diff: QVec = (0..n).map(|i| rat(x0[i]) - &tr[i]).collect();
        for i in 0..n {
            for j in 0..n {
                r0 += &diff[i] * &diff[j] * &l.red.gram.rows[i][j];
            }
        }
        let found = l.enumerate_reduced(&tr, &r0);
        let min = found.iter().map(|(_, q)| q.clone()).min().unwrap();
        let minimizers: Vec<Vec<i64>> = found
            .into_iter()
            .filter(|(_, q)| *q == min)
            .map(|(x, _)| l.from_reduced(&x))
            .collect();
        if minimizers.len() == 2 {
            for w in minimizers {
                let v: Vec<i64> = (0..n).map(|i| coset[i] + 2 * w[i]).collect();
                out.push(LatticeVector::new(v));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Standard basis for a named lattice family.
pub fn build_named_lattice(name: &NamedLattice) -> Result<Lattice> {
    let mk_rows = |rows: Vec<Vec<i64>>| -> QMat {
        QMat {
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
        }
    };
    let mut l = match name {
        NamedLattice::Zn(n) => {
            if *n == 0 {
                return Err(Error::Config("Zn needs rank ≥ 1".into()));
            }
            Lattice::new(QMat::identity(*n), 1)?
        }
        NamedLattice::An(n) => {
            if *n == 0 {
                return Err(Error::Config("An needs rank ≥ 1".into()));
            }
            let mut rows = Vec::new();
            for i in 0..*n {
                let mut r = vec![0i64; n + 1];
                r[i] = 1;
                r[i + 1] = -1;
                rows.push(r);
            }
            Lattice::new(mk_rows(rows), 1)?
        }
        NamedLattice::Dn(n) => {
            if *n < 3 {
                return Err(Error::Config("Dn needs rank ≥ 3".into()));
            }
            let mut rows = Vec::new();
            for i in 0..n - 1 {
                let mut r = vec![0i64; *n];
                r[i] = 1;
                r[i + 1] = -1;
                rows.push(r);
            }
            let mut r = vec![0i64; *n];
            r[n - 2] = 1;
            r[n - 1] = 1;
            rows.push(r);
            Lattice::new(mk_rows(rows), 1)?
        }
        NamedLattice::En(n) => {
            if !(6..=8).contains(n) {
                return Err(Error::Config("En is defined for n ∈ {6,7,8}".into()));
            }
            // Bourbaki simple roots of E8 in R^8; E6/E7 take the first 6/7
            let mut rows: Vec<QVec> = Vec::new();
            let mut a1 = vec![frac(-1, 2); 8];
            a1[0] = frac(1, 2);
            a1[7] = frac(1, 2);
            rows.push(a1);
            let mut a2 = vec![Rat::zero(); 8];
            a2[0] = rat(1);
            a2[1] = rat(1);
            rows.push(a2);
            for k in 0..6 {
                let mut r = vec![Rat::zero(); 8];
                r[k] = rat(-1);
                r[k + 1] = rat(1);
                rows.push(r);
            }
            rows.truncate(*n);
            Lattice::new(QMat { rows }, 1)?
        }
        NamedLattice::LeechMOG => {
            let code = golay::build_golay();
            let basis = golay::leech_basis(&code);
            let rows: Vec<Vec<i64>> = basis;
            Lattice::new(mk_rows(rows), 8)?
        }
    };
    l.name = Some(name.clone());
    Ok(l)
}

/// Parses a named-lattice spec such as "leech", "zn 3", "an 2", "dn 4", "en 8".
pub fn parse_lattice_name(s: &str) -> Result<NamedLattice> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    let rank = |toks: &[&str]| -> Result<usize> {
        toks.get(1)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Config(format!("missing or bad rank in {s:?}")))
    };
    match toks.first().map(|t| t.to_ascii_lowercase()).as_deref() {
        Some("leech") => Ok(NamedLattice::LeechMOG),
        Some("zn") => Ok(NamedLattice::Zn(rank(&toks)?)),
        Some("an") => Ok(NamedLattice::An(rank(&toks)?)),
        Some("dn") => Ok(NamedLattice::Dn(rank(&toks)?)),
        Some("en") => Ok(NamedLattice::En(rank(&toks)?)),
        _ => Err(Error::Config(format!("unknown lattice {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(n: NamedLattice) -> Lattice {
        build_named_lattice(&n).unwrap()
    }

    #[test]
    fn z1_shortest() {
        let l = named(NamedLattice::Zn(1));
        let min = shortest_vectors(&l);
        assert_eq!(min.min_norm_sq, rat(1));
        assert_eq!(min.len(), 2);
    }

    #[test]
    fn a2_shortest() {
        let l = named(NamedLattice::An(2));
        assert_eq!(l.gram, QMat::from_i64(&[&[2, -1], &[-1, 2]]));
        let min = shortest_vectors(&l);
        assert_eq!(min.min_norm_sq, rat(2));
        assert_eq!(min.len(), 6);
        for v in &min.vectors {
            assert_eq!(l.norm_sq(v), rat(2));
        }
    }

    #[test]
    fn d4_and_e8_min_counts() {
        let d4 = named(NamedLattice::Dn(4));
        assert_eq!(shortest_vectors(&d4).len(), 24);
        let e8 = named(NamedLattice::En(8));
        let min = shortest_vectors(&e8);
        assert_eq!(min.min_norm_sq, rat(2));
        assert_eq!(min.len(), 240);
        let e7 = named(NamedLattice::En(7));
        assert_eq!(shortest_vectors(&e7).len(), 126);
        let e6 = named(NamedLattice::En(6));
        assert_eq!(shortest_vectors(&e6).len(), 72);
    }

    #[test]
    fn ball_z2() {
        let l = named(NamedLattice::Zn(2));
        let c = vec![Rat::zero(), Rat::zero()];
        let pts = vectors_in_ball(&l, &c, &rat(1)).unwrap();
        assert_eq!(pts.len(), 5);
    }

    #[test]
    fn closest_midpoint_tie() {
        let l = named(NamedLattice::Zn(1));
        let (d, pts) = closest_vectors(&l, &[frac(1, 2)]).unwrap();
        assert_eq!(d, frac(1, 4));
        assert_eq!(
            pts,
            vec![LatticeVector::new(vec![0]), LatticeVector::new(vec![1])]
        );
    }

    #[test]
    fn closest_lattice_point_is_exact() {
        let l = named(NamedLattice::An(2));
        let x = l.ambient(&[2, -1]);
        let (d, pts) = closest_vectors(&l, &x).unwrap();
        assert!(d.is_zero());
        assert_eq!(pts, vec![LatticeVector::new(vec![2, -1])]);
    }

    #[test]
    fn voronoi_counts() {
        assert_eq!(
            voronoi_relevant_vectors(&named(NamedLattice::Zn(1)))
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            voronoi_relevant_vectors(&named(NamedLattice::An(2)))
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            voronoi_relevant_vectors(&named(NamedLattice::Dn(4)))
                .unwrap()
                .len(),
            24
        );
        assert!(matches!(
            voronoi_relevant_vectors(&named(NamedLattice::LeechMOG)),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn lll_reduces_leech_gram_to_norm_four_diagonal() {
        let l = named(NamedLattice::LeechMOG);
        for i in 0..24 {
            assert_eq!(l.red.gram.rows[i][i], rat(4));
        }
        // G' = U G Uᵀ
        let u = QMat {
            rows: l
                .red
                .u
                .iter()
                .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
                .collect(),
        };
        let check = u.mul(&l.gram).unwrap().mul(&u.transpose()).unwrap();
        assert_eq!(check, l.red.gram);
    }

    #[test]
    fn coords_roundtrip() {
        let l = named(NamedLattice::An(2));
        let x = l.ambient(&[3, -2]);
        assert_eq!(l.coords_of(&x).unwrap(), Some(vec![3, -2]));
        let off = vec![rat(1), Rat::zero(), Rat::zero()];
        assert_eq!(l.coords_of(&off).unwrap(), None);
    }

    #[test]
    fn leech_table_vector_is_in_lattice_after_doubling() {
        // 2v for the first fixture row is a lattice point (deep hole at α=1/2)
        let l = named(NamedLattice::LeechMOG);
        let rows = golay::parse_table(golay::bundled_table1()).unwrap();
        let v = rows[0].vector.ambient();
        let doubled: Vec<Rat> = v.iter().map(|x| x + x).collect();
        assert!(l.coords_of(&doubled).unwrap().is_some());
    }
}
