//! Exact H/V polytope representations, rational simplex LP, double
//! description conversion, incidence sets, tangent cones, and edge walks.
//!
//! The polar Cont(L)* is represented in lattice coordinates: a point y stands
//! for the ambient point y·B, and the inequality for a minimal vector w reads
//! (gram·w)·y ≤ ½⟨w,w⟩. This keeps every instance n-dimensional even when
//! the ambient space is larger (Aₙ), and makes the Leech inequalities
//! integral.

use num::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};

use crate::exactalg::{self, dot, rat, QMat, QVec, Rat};
use crate::lattice::{shortest_vectors, Lattice, MinSet};
use crate::{Error, Result};

/// Inequality system a·x ≤ b.
#[derive(Clone)]
pub struct HPolytope {
    pub ineqs: Vec<(QVec, Rat)>,
    pub dim: usize,
    int_form: Option<IntForm>,
}

/// Per-row integer scaling of the system for fast exact incidence tests.
#[derive(Clone)]
struct IntForm {
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
}

/// Vertex/ray representation. Rays are scaled so their first nonzero
/// coordinate has absolute value 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    pub vertices: Vec<QVec>,
    pub rays: Vec<QVec>,
}

/// Sorted indices of the inequalities tight at a point, with the vertex
/// certificate (tight normals span the space).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceSet {
    pub indices: Vec<u32>,
    pub certified: bool,
}

impl HPolytope {
    pub fn new(ineqs: Vec<(QVec, Rat)>, dim: usize) -> Result<Self> {
        for (a, _) in &ineqs {
            if a.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: a.len(),
                });
            }
            if a.iter().all(|x| x.is_zero()) {
                return Err(Error::Shape("zero normal vector".into()));
            }
        }
        let int_form = build_int_form(&ineqs);
        Ok(HPolytope {
            ineqs,
            dim,
            int_form,
        })
    }

    pub fn len(&self) -> usize {
        self.ineqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ineqs.is_empty()
    }
}

fn lcm_i64(a: i64, b: i64) -> Option<i64> {
    if a == 0 || b == 0 {
        return None;
    }
    let g = num::integer::gcd(a, b);
    (a / g).checked_mul(b)
}

fn build_int_form(ineqs: &[(QVec, Rat)]) -> Option<IntForm> {
    let mut rows = Vec::with_capacity(ineqs.len());
    let mut rhs = Vec::with_capacity(ineqs.len());
    for (a, b) in ineqs {
        let mut k: i64 = b.denom().to_i64()?;
        for x in a {
            k = lcm_i64(k, x.denom().to_i64()?)?;
        }
        let kb = num::BigInt::from(k);
        let mut row = Vec::with_capacity(a.len());
        for x in a {
            row.push((x.numer() * &kb / x.denom()).to_i64()?);
        }
        rhs.push((b.numer() * &kb / b.denom()).to_i64()?);
        rows.push(row);
    }
    Some(IntForm { rows, rhs })
}

/// The scaled polar {y : (gram·w)·y ≤ ½⟨w,w⟩ for w ∈ Min L} in lattice
/// coordinates, one inequality per shortest vector in MinSet order.
pub fn contact_polar(l: &Lattice) -> HPolytope {
    let min = shortest_vectors(l);
    contact_polar_from_min(l, &min)
}

pub fn contact_polar_from_min(l: &Lattice, min: &MinSet) -> HPolytope {
    let n = l.dim();
    let rhs = &min.min_norm_sq / rat(2);
    let ineqs = min
        .vectors
        .iter()
        .map(|w| {
            let mut a = vec![Rat::zero(); n];
            for (i, &wi) in w.coords.iter().enumerate() {
                if wi == 0 {
                    continue;
                }
                let c = rat(wi);
                for (aj, gij) in a.iter_mut().zip(&l.gram.rows[i]) {
                    *aj += &c * gij;
                }
            }
            (a, rhs.clone())
        })
        .collect();
    HPolytope::new(ineqs, n).expect("minimal vectors give nonzero normals")
}

/// Exact tight set of a feasible point, plus the vertex certificate.
pub fn incidence_set(h: &HPolytope, x: &[Rat]) -> Result<IncidenceSet> {
    if x.len() != h.dim {
        return Err(Error::Dimension {
            expected: h.dim,
            got: x.len(),
        });
    }
    let mut tight = Vec::new();
    if let Some(fast) = try_incidence_int(h, x) {
        match fast {
            Ok(t) => tight = t,
            Err(i) => return Err(Error::NotInPolytope(i)),
        }
    } else {
        for (i, (a, b)) in h.ineqs.iter().enumerate() {
            let v = dot(a, x);
            if &v > b {
                return Err(Error::NotInPolytope(i));
            }
            if &v == b {
                tight.push(i as u32);
            }
        }
    }
    let certified = tight_rank(h, &tight) == h.dim;
    Ok(IncidenceSet {
        indices: tight,
        certified,
    })
}

/// i128 fast path; None when the point or system does not fit.
/// Inner Err(i) = inequality i violated.
fn try_incidence_int(h: &HPolytope, x: &[Rat]) -> Option<std::result::Result<Vec<u32>, usize>> {
    let form = h.int_form.as_ref()?;
    let mut den: i64 = 1;
    for xi in x {
        den = lcm_i64(den, xi.denom().to_i64()?)?;
    }
    let dbig = num::BigInt::from(den);
    let mut nums = Vec::with_capacity(x.len());
    for xi in x {
        nums.push((xi.numer() * &dbig / xi.denom()).to_i128()?);
    }
    let den = den as i128;
    let mut tight = Vec::new();
    for (i, (row, &b)) in form.rows.iter().zip(&form.rhs).enumerate() {
        let mut s: i128 = 0;
        for (&aij, &xj) in row.iter().zip(&nums) {
            s = s.checked_add((aij as i128).checked_mul(xj)?)?;
        }
        let rhs = (b as i128).checked_mul(den)?;
        match s.cmp(&rhs) {
            std::cmp::Ordering::Greater => return Some(Err(i)),
            std::cmp::Ordering::Equal => tight.push(i as u32),
            std::cmp::Ordering::Less => {}
        }
    }
    Some(Ok(tight))
}

pub fn tight_rank(h: &HPolytope, tight: &[u32]) -> usize {
    let rows: Vec<QVec> = tight
        .iter()
        .map(|&i| h.ineqs[i as usize].0.clone())
        .collect();
    exactalg::rank(&QMat { rows })
}

/// Homogeneous tangent cone {a·d ≤ 0 for tight a} at a certified vertex.
/// Cone inequality j corresponds to tight index j of the returned incidence.
pub fn tangent_cone(h: &HPolytope, v: &[Rat]) -> Result<(HPolytope, IncidenceSet)> {
    let inc = incidence_set(h, v)?;
    if !inc.certified {
        return Err(Error::NotAVertex);
    }
    let ineqs = inc
        .indices
        .iter()
        .map(|&i| (h.ineqs[i as usize].0.clone(), Rat::zero()))
        .collect();
    Ok((HPolytope::new(ineqs, h.dim)?, inc))
}

/// Walks from vertex v along an extreme ray of its tangent cone to the
/// adjacent vertex.
pub fn edge_walk(h: &HPolytope, v: &[Rat], ray: &[Rat]) -> Result<QVec> {
    let mut best: Option<Rat> = None;
    for (a, b) in &h.ineqs {
        let ar = dot(a, ray);
        if ar.is_positive() {
            let t = (b - dot(a, v)) / ar;
            if best.as_ref().map_or(true, |cur| &t < cur) {
                best = Some(t);
            }
        }
    }
    let t = best.ok_or(Error::UnboundedEdge)?;
    Ok(v.iter().zip(ray).map(|(vi, ri)| vi + &t * ri).collect())
}

pub const DD_DIM_LIMIT: usize = 12;
pub const DD_INEQ_LIMIT: usize = 64;

/// Double description conversion with default instance limits.
pub fn dual_description(h: &HPolytope) -> Result<VPolytope> {
    if h.dim > DD_DIM_LIMIT && h.len() > DD_INEQ_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "double description limited to dim ≤ {DD_DIM_LIMIT} or ≤ {DD_INEQ_LIMIT} inequalities; got dim {} with {} inequalities",
            h.dim,
            h.len()
        )));
    }
    dual_description_unchecked(h)
}

/// Normalizes a ray so its first nonzero coordinate has absolute value 1.
fn normalize_ray(r: &mut [Rat]) {
    if let Some(first) = r.iter().find(|x| !x.is_zero()) {
        let scale = if first.is_negative() {
            -first.clone()
        } else {
            first.clone()
        };
        for x in r.iter_mut() {
            *x /= &scale;
        }
    }
}

struct DdRay {
    /// coordinates in R^{d+1}, last entry the homogenizing t
    coords: QVec,
    /// bitset over processed inequality indices that are tight at this ray
    zero: Vec<u64>,
}

/// Double description on the homogenization; no instance-size check.
pub fn dual_description_unchecked(h: &HPolytope) -> Result<VPolytope> {
    let d = h.dim + 1;
    let homogeneous_input = h.ineqs.iter().all(|(_, b)| b.is_zero());
    // homogenized rows (a, -b), plus t ≥ 0 as row (0, -1)
    let mut rows: Vec<QVec> = h
        .ineqs
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(-b.clone());
            r
        })
        .collect();
    let mut t_row = vec![Rat::zero(); d];
    t_row[d - 1] = rat(-1);
    rows.push(t_row);
    let m = rows.len();

    // initial cone: d linearly independent rows; rank < d means lineality
    let mut work: Vec<QVec> = Vec::new();
    let mut init_idx: Vec<usize> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = work.clone();
        trial.push(r.clone());
        if exactalg::rank(&QMat { rows: trial }) == work.len() + 1 {
            work.push(r.clone());
            init_idx.push(i);
            if work.len() == d {
                break;
            }
        }
    }
    if work.len() < d {
        return Err(Error::Shape(
            "homogenized system is not pointed (lineality space present)".into(),
        ));
    }
    let minv = exactalg::invert(&QMat { rows: work })
        .ok_or_else(|| Error::Internal("independent rows must be invertible".into()))?;
    // ray j = -(column j of M⁻¹): tight on all initial rows except j
    let words = m.div_ceil(64);
    let mut rays: Vec<DdRay> = Vec::new();
    for j in 0..d {
        let mut coords: QVec = minv.rows.iter().map(|r| -r[j].clone()).collect();
        normalize_ray(&mut coords);
        let mut zero = vec![0u64; words];
        for (k, &idx) in init_idx.iter().enumerate() {
            if k != j {
                zero[idx / 64] |= 1 << (idx % 64);
            }
        }
        rays.push(DdRay { coords, zero });
    }
    let mut processed: Vec<usize> = init_idx.clone();
    let mut remaining: Vec<usize> = (0..m).filter(|i| !init_idx.contains(i)).collect();

    while !remaining.is_empty() {
        // pick the remaining inequality violated by the most current rays
        let mut best = (0usize, usize::MAX);
        for (pos, &i) in remaining.iter().enumerate() {
            let viol = rays
                .iter()
                .filter(|r| dot(&rows[i], &r.coords).is_positive())
                .count();
            if best.1 == usize::MAX || viol > best.0 {
                best = (viol, pos);
            }
        }
        let i = remaining.remove(best.1);
        let a = &rows[i];
        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, &r.coords)).collect();
        let mut next: Vec<DdRay> = Vec::new();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        // adjacent (p, q) pairs combine into a new ray on the hyperplane
        for &p in &pos {
            for &q in &neg {
                // quick filter then exact rank test for adjacency
                let common: Vec<u32> = {
                    let mut c = Vec::new();
                    for w in 0..words {
                        let mut bits = rays[p].zero[w] & rays[q].zero[w];
                        while bits != 0 {
                            let b = bits.trailing_zeros();
                            c.push((w as u32) * 64 + b);
                            bits &= bits - 1;
                        }
                    }
                    c
                };
                if common.len() + 2 < d {
                    continue;
                }
                let common_rows: Vec<QVec> =
                    common.iter().map(|&ci| rows[ci as usize].clone()).collect();
                if exactalg::rank(&QMat { rows: common_rows }) != d - 2 {
                    continue;
                }
                let mut coords: QVec = rays[p]
                    .coords
                    .iter()
                    .zip(&rays[q].coords)
                    .map(|(cp, cq)| &vals[p] * cq - &vals[q] * cp)
                    .collect();
                normalize_ray(&mut coords);
                let mut zero = vec![0u64; words];
                for w in 0..words {
                    zero[w] = rays[p].zero[w] & rays[q].zero[w];
                }
                zero[i / 64] |= 1 << (i % 64);
                next.push(DdRay { coords, zero });
            }
        }
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_positive() {
                continue;
            }
            if vals[k].is_zero() {
                r.zero[i / 64] |= 1 << (i % 64);
            }
            next.push(r);
        }
        rays = next;
        processed.push(i);
    }

    let mut vertices: Vec<QVec> = Vec::new();
    let mut out_rays: Vec<QVec> = Vec::new();
    for r in rays {
        let t = &r.coords[d - 1];
        if t.is_positive() {
            if homogeneous_input {
                // for cone input the apex direction is not a geometric ray
                continue;
            }
            let v: QVec = r.coords[..d - 1].iter().map(|x| x / t).collect();
            vertices.push(v);
        } else {
            debug_assert!(t.is_zero());
            let mut v: QVec = r.coords[..d - 1].to_vec();
            normalize_ray(&mut v);
            out_rays.push(v);
        }
    }
    vertices.sort();
    out_rays.sort();
    Ok(VPolytope {
        vertices,
        rays: out_rays,
    })
}

/// Naive vertex enumeration (all dim-subsets of inequalities) for
/// cross-checking dual_description on small instances.
pub fn naive_vertices(h: &HPolytope) -> Vec<QVec> {
    use itertools::Itertools;
    let n = h.dim;
    let mut out: Vec<QVec> = Vec::new();
    for subset in (0..h.len()).combinations(n) {
        let a = QMat {
            rows: subset.iter().map(|&i| h.ineqs[i].0.clone()).collect(),
        };
        let b: QVec = subset.iter().map(|&i| h.ineqs[i].1.clone()).collect();
        if exactalg::rank(&a) != n {
            continue;
        }
        let Ok(Some(x)) = exactalg::solve_linear(&a, &b) else {
            continue;
        };
        if h.ineqs.iter().all(|(ai, bi)| &dot(ai, &x) <= bi) && !out.contains(&x) {
            out.push(x);
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// exact simplex

struct Tableau {
    /// m constraint rows followed by one cost row; each row has ncols+1
    /// entries, the last being the rhs / negated objective value
    rows: Vec<QVec>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule; maximizes the objective encoded in the cost row.
    /// Returns false on unboundedness.
    fn run(&mut self) -> bool {
        let m = self.basis.len();
        loop {
            let cost = &self.rows[m];
            let Some(c) = (0..self.ncols).find(|&j| cost[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..m {
                if self.rows[r][c].is_positive() {
                    let ratio = &self.rows[r][self.ncols] / &self.rows[r][c];
                    let better = match &leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

/// Exact two-phase simplex for max c·x subject to A·x ≤ b (x free, split into
/// positive parts). Returns an optimal x, or None when the objective is
/// unbounded over the feasible set.
pub fn simplex_max(h: &HPolytope, c: &[Rat]) -> Result<Option<QVec>> {
    let n = h.dim;
    let m = h.len();
    let nvars = 2 * n + m; // x⁺, x⁻, slacks
    let mut rows: Vec<QVec> = Vec::with_capacity(m + 1);
    let mut flipped = vec![false; m];
    for (i, (a, b)) in h.ineqs.iter().enumerate() {
        let mut row = vec![Rat::zero(); nvars + 1];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -a[j].clone();
        }
        row[2 * n + i] = Rat::one();
        row[nvars] = b.clone();
        if b.is_negative() {
            flipped[i] = true;
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        rows.push(row);
    }
    let nflip = flipped.iter().filter(|&&f| f).count();

    if nflip > 0 {
        // phase 1: artificial columns on flipped rows, maximize −Σ artificials
        let total = nvars + nflip;
        let mut art_col = nvars;
        let mut basis = Vec::with_capacity(m);
        let mut prows: Vec<QVec> = Vec::with_capacity(m + 1);
        for (i, row) in rows.iter().enumerate() {
            let mut r = row[..nvars].to_vec();
            r.extend(vec![Rat::zero(); nflip]);
            r.push(row[nvars].clone());
            if flipped[i] {
                r[art_col] = Rat::one();
                basis.push(art_col);
                art_col += 1;
            } else {
                basis.push(2 * n + i);
            }
            prows.push(r);
        }
        let mut cost = vec![Rat::zero(); total + 1];
        // reduced cost of max −Σ art, with artificials basic: add their rows
        for j in nvars..total {
            cost[j] = -Rat::one();
        }
        for (i, &b) in basis.iter().enumerate() {
            if b >= nvars {
                let f = cost[b].clone();
                for j in 0..=total {
                    let t = &f * &prows[i][j];
                    cost[j] -= t;
                }
            }
        }
        prows.push(cost);
        let mut t = Tableau {
            rows: prows,
            basis,
            ncols: total,
        };
        if !t.run() {
            return Err(Error::Internal("phase-1 objective is bounded".into()));
        }
        if t.rows[m][total].is_positive() {
            // objective value is -(cost row rhs); positive rhs means Σart > 0
            return Err(Error::Infeasible);
        }
        // drive out any basic artificials sitting at zero
        let mut drop_rows = Vec::new();
        for r in 0..m {
            if t.basis[r] >= nvars {
                match (0..nvars).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => drop_rows.push(r),
                }
            }
        }
        // rebuild without artificial columns and dropped redundant rows
        let mut rows2: Vec<QVec> = Vec::new();
        let mut basis2 = Vec::new();
        for r in 0..m {
            if drop_rows.contains(&r) {
                continue;
            }
            let mut row = t.rows[r][..nvars].to_vec();
            row.push(t.rows[r][nvars + nflip].clone());
            rows2.push(row);
            basis2.push(t.basis[r]);
        }
        return simplex_phase2(rows2, basis2, nvars, n, c);
    }
    // all b ≥ 0: slacks form a feasible basis
    let basis: Vec<usize> = (0..m).map(|i| 2 * n + i).collect();
    simplex_phase2(rows, basis, nvars, n, c)
}

fn simplex_phase2(
    mut rows: Vec<QVec>,
    basis: Vec<usize>,
    nvars: usize,
    n: usize,
    c: &[Rat],
) -> Result<Option<QVec>> {
    let _m = rows.len();
    let mut cost = vec![Rat::zero(); nvars + 1];
    for j in 0..n {
        cost[j] = c[j].clone();
        cost[n + j] = -c[j].clone();
    }
    // reduce cost row against the current basis
    for (i, &b) in basis.iter().enumerate() {
        if !cost[b].is_zero() {
            let f = cost[b].clone();
            for j in 0..=nvars {
                let t = &f * &rows[i][j];
                cost[j] -= t;
            }
        }
    }
    rows.push(cost);
    let mut t = Tableau {
        rows,
        basis,
        ncols: nvars,
    };
    if !t.run() {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        let val = t.rows[r][nvars].clone();
        if b < n {
            x[b] += val;
        } else if b < 2 * n {
            x[b - n] -= val;
        }
    }
    Ok(Some(x))
}

/// An exact vertex of a bounded full-dimensional H-polytope: optimizes a
/// deterministic pseudorandom objective, then walks within the optimal face
/// until the tight normals have full rank.
pub fn lp_vertex(h: &HPolytope) -> Result<(QVec, IncidenceSet)> {
    let n = h.dim;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    for _attempt in 0..=n {
        let c: QVec = (0..n).map(|_| rat(rng.gen_range(-999i64..1000))).collect();
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        let Some(mut x) = simplex_max(h, &c)? else {
            continue; // unbounded for this objective; retry with another
        };
        // walk to a vertex: each step adds an independent tight normal
        for _ in 0..=n {
            let inc = incidence_set(h, &x)?;
            if inc.certified {
                return Ok((x, inc));
            }
            let tight_rows = QMat {
                rows: inc
                    .indices
                    .iter()
                    .map(|&i| h.ineqs[i as usize].0.clone())
                    .collect(),
            };
            let ns = exactalg::nullspace(&tight_rows);
            let d = match ns.first() {
                Some(d) => d.clone(),
                None if inc.indices.is_empty() => {
                    (0..n).map(|j| rat((j == 0) as i64)).collect()
                }
                None => return Err(Error::Internal("rank-deficient but no nullspace".into())),
            };
            let step = |dir: &QVec| -> Option<Rat> {
                let mut best: Option<Rat> = None;
                for (a, b) in &h.ineqs {
                    let ad = dot(a, dir);
                    if ad.is_positive() {
                        let t = (b - dot(a, &x)) / ad;
                        if best.as_ref().map_or(true, |cur| &t < cur) {
                            best = Some(t);
                        }
                    }
                }
                best
            };
            let moved = if let Some(t) = step(&d) {
                for (xi, di) in x.iter_mut().zip(&d) {
                    *xi += &t * di;
                }
                true
            } else {
                let neg: QVec = d.iter().map(|v| -v.clone()).collect();
                if let Some(t) = step(&neg) {
                    for (xi, di) in x.iter_mut().zip(&neg) {
                        *xi += &t * di;
                    }
                    true
                } else {
                    false // unbounded in both directions: not a polytope
                }
            };
            if !moved {
                break;
            }
        }
    }
    Err(Error::DegenerateObjective)
}
