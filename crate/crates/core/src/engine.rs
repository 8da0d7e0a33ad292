//! Adjacency decomposition: orbit-wise vertex enumeration of an H-polytope
//! under a permutation symmetry group, with one recursion level into vertex
//! figures for high-incidence vertices.

use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::Mutex;

use num::Zero;

use crate::exactalg::{dot, QMat, QVec, Rat};
use crate::lattice::{closest_vectors, Lattice};
use crate::polytope::{
    dual_description, edge_walk, incidence_set, lp_vertex, tangent_cone, HPolytope, IncidenceSet,
};
use crate::symmetry::{
    set_key, set_stabilizer, set_transporter, stabilizer_chain_for_set, Perm,
    PermAction, SetKey,
};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct RecursionPolicy {
    /// treat directly by double description when |tight| ≤ this …
    pub direct_threshold: usize,
    /// … or the dimension is at most this
    pub direct_dim: usize,
    /// node budget for set-stabilizer/transporter searches
    pub budget: u64,
    /// Undecided searches escalate the budget ×10 this many times, then abort
    pub max_escalations: u32,
    pub workers: usize,
    /// canonicalize representatives by full tight-set orbit enumeration when
    /// the orbit is at most this large
    pub canonical_orbit_limit: usize,
}

impl Default for RecursionPolicy {
    fn default() -> Self {
        RecursionPolicy {
            direct_threshold: 48,
            direct_dim: 12,
            budget: 10_000_000,
            max_escalations: 3,
            workers: 1,
            canonical_orbit_limit: 1_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    /// canonical representative vertex (coordinates of the H-polytope space)
    pub rep_vertex: QVec,
    pub tight: IncidenceSet,
    pub key: SetKey,
    pub stabilizer_order: u128,
    /// N: number of tight inequalities
    pub incidence_count: usize,
    /// ⟨v,v⟩ of the representative under the supplied Gram matrix
    pub norm_sq: Rat,
}

/// Runs a budgeted search with ×10 escalation on Undecided.
fn with_escalation<T>(
    policy: &RecursionPolicy,
    mut f: impl FnMut(u64) -> Result<T>,
) -> Result<T> {
    let mut budget = policy.budget;
    for _ in 0..=policy.max_escalations {
        match f(budget) {
            Err(Error::Undecided(_)) => budget = budget.saturating_mul(10),
            other => return other,
        }
    }
    Err(Error::Undecided(budget))
}

/// BFS orbit of a sorted index set under permutation generators. Returns the
/// lexicographically smallest image and the orbit size, or None past `limit`.
fn set_orbit_min(gens: &[Perm], s: &[u32], limit: usize) -> Option<(Vec<u32>, usize)> {
    let start: Vec<u32> = s.to_vec();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
    let mut queue = vec![start.clone()];
    let mut min = start;
    while let Some(cur) = queue.pop() {
        for g in gens {
            let mut img: Vec<u32> = cur.iter().map(|&x| g[x as usize]).collect();
            img.sort_unstable();
            if !seen.contains(&img) {
                if seen.len() >= limit {
                    return None;
                }
                if img < min {
                    min = img.clone();
                }
                seen.insert(img.clone());
                queue.push(img);
            }
        }
    }
    Some((min, seen.len()))
}

/// The unique point where the given inequalities are all tight (the vertex
/// with that tight set).
fn vertex_from_tight(h: &HPolytope, tight: &[u32]) -> Result<QVec> {
    let rows: Vec<QVec> = tight
        .iter()
        .map(|&i| h.ineqs[i as usize].0.clone())
        .collect();
    let b: QVec = tight
        .iter()
        .map(|&i| h.ineqs[i as usize].1.clone())
        .collect();
    let m = QMat { rows };
    match crate::exactalg::solve_linear(&m, &b)? {
        Some(x) => Ok(x),
        None => Err(Error::Internal(
            "tight system of a vertex must be consistent".into(),
        )),
    }
}

fn norm_sq_of(gram: &QMat, v: &[Rat]) -> Rat {
    let gv = gram.mul_vec(v).expect("gram dimension matches vertex");
    dot(v, &gv)
}

struct Bank {
    records: Vec<OrbitRecord>,
    by_key: HashMap<SetKey, Vec<usize>>,
    /// canonical tight sets for exact dedup when canonicalization succeeded
    canon_sets: HashMap<Vec<u32>, usize>,
    /// min-heap over (incidence_count, record index)
    queue: BinaryHeap<std::cmp::Reverse<(usize, usize)>>,
    in_flight: usize,
    group_order: u128,
}

struct EngineCtx<'a> {
    h: &'a HPolytope,
    action: &'a PermAction,
    gram: &'a QMat,
    policy: RecursionPolicy,
}

impl<'a> EngineCtx<'a> {
    /// Insert-if-new: canonicalize, fingerprint, and certify inequivalence
    /// against every stored record with the same key.
    fn insert(&self, bank: &mut Bank, v: &QVec) -> Result<Option<usize>> {
        let inc = incidence_set(self.h, v)?;
        if !inc.certified {
            return Err(Error::NotAVertex);
        }
        let canon = set_orbit_min(
            &self.action.perm_gens,
            &inc.indices,
            self.policy.canonical_orbit_limit,
        );
        let (tight, vertex, stab_order, canonical) = match canon {
            Some((min_set, orbit_size)) => {
                if bank.group_order % orbit_size as u128 != 0 {
                    return Err(Error::Internal(
                        "tight-set orbit size must divide the group order".into(),
                    ));
                }
                if let Some(&idx) = bank.canon_sets.get(&min_set) {
                    let _ = idx;
                    return Ok(None);
                }
                let vertex = vertex_from_tight(self.h, &min_set)?;
                let stab = bank.group_order / orbit_size as u128;
                (min_set, vertex, stab, true)
            }
            None => {
                let chain = stabilizer_chain_for_set(self.action, &inc.indices, None);
                let (_, stab) = with_escalation(&self.policy, |b| {
                    set_stabilizer(self.action, &chain, &inc.indices, b)
                })?;
                (inc.indices.clone(), v.clone(), stab, false)
            }
        };
        let key = set_key(self.action, &tight);
        if let Some(bucket) = bank.by_key.get(&key) {
            for &i in bucket {
                let other = &bank.records[i];
                let equivalent = if canonical && bank.canon_sets.contains_key(&other.tight.indices)
                {
                    // both canonical: equivalence ⟺ identical canonical set
                    other.tight.indices == tight
                } else {
                    let chain = stabilizer_chain_for_set(self.action, &tight, None);
                    with_escalation(&self.policy, |b| {
                        set_transporter(self.action, &chain, &tight, &other.tight.indices, b)
                    })?
                    .is_some()
                };
                if equivalent {
                    return Ok(None);
                }
            }
        }
        let record = OrbitRecord {
            norm_sq: norm_sq_of(self.gram, &vertex),
            incidence_count: tight.len(),
            stabilizer_order: stab_order,
            tight: IncidenceSet {
                indices: tight.clone(),
                certified: true,
            },
            key: key.clone(),
            rep_vertex: vertex,
        };
        let idx = bank.records.len();
        bank.records.push(record);
        bank.by_key.entry(key).or_default().push(idx);
        if canonical {
            bank.canon_sets.insert(tight, idx);
        }
        bank.queue
            .push(std::cmp::Reverse((bank.records[idx].incidence_count, idx)));
        Ok(Some(idx))
    }

    /// Directions of the extreme rays of the tangent cone at a vertex — all
    /// of them when treated directly, or stabilizer-orbit representatives
    /// when obtained by recursion.
    fn cone_ray_directions(&self, rep: &QVec, tight: &[u32]) -> Result<Vec<QVec>> {
        let (cone, inc) = tangent_cone(self.h, rep)?;
        debug_assert_eq!(inc.indices, tight);
        if tight.len() <= self.policy.direct_threshold || self.h.dim <= self.policy.direct_dim {
            let vp = dual_description(&cone)?;
            return Ok(vp.rays);
        }
        self.rays_by_recursion(&cone, tight)
    }

    /// One recursion level: slice the pointed cone with {Σᵢ aᵢ·d = −1},
    /// a bounded polytope whose vertices are the cone's extreme rays, and
    /// enumerate its vertex orbits under the vertex stabilizer.
    fn rays_by_recursion(&self, cone: &HPolytope, tight: &[u32]) -> Result<Vec<QVec>> {
        let d = cone.dim;
        let mut s = vec![Rat::zero(); d];
        for (a, _) in &cone.ineqs {
            for (si, ai) in s.iter_mut().zip(a) {
                *si += ai;
            }
        }
        let ss = dot(&s, &s);
        if ss.is_zero() {
            return Err(Error::Internal("pointed cone has nonzero normal sum".into()));
        }
        // d0 with s·d0 = -1
        let d0: QVec = s.iter().map(|si| -si / &ss).collect();
        let nullbasis = crate::exactalg::nullspace(&QMat {
            rows: vec![s.clone()],
        });
        let k = nullbasis.len(); // = d - 1
        let mut slice_ineqs = Vec::with_capacity(cone.len());
        for (a, _) in &cone.ineqs {
            let row: QVec = nullbasis.iter().map(|n| dot(a, n)).collect();
            let rhs = -dot(a, &d0);
            slice_ineqs.push((row, rhs));
        }
        let slice = HPolytope::new(slice_ineqs, k)?;
        // stabilizer of the tight set acts on the slice's inequality indices
        let chain = stabilizer_chain_for_set(self.action, tight, None);
        let (stab_gens, stab_order) = with_escalation(&self.policy, |b| {
            set_stabilizer(self.action, &chain, tight, b)
        })?;
        let pos: HashMap<u32, u32> = tight
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i as u32))
            .collect();
        let sub_gens: Vec<Perm> = if stab_gens.is_empty() {
            vec![(0..tight.len() as u32).collect()]
        } else {
            stab_gens
                .iter()
                .map(|g| tight.iter().map(|&t| pos[&g[t as usize]]).collect())
                .collect()
        };
        let sub_action = PermAction {
            points_num: tight
                .iter()
                .map(|&t| self.action.points_num[t as usize].clone())
                .collect(),
            points_den: self.action.points_den,
            ip_denom: self.action.ip_denom,
            perm_gens: sub_gens,
        };
        let mut sub_policy = self.policy.clone();
        sub_policy.direct_dim = usize::MAX; // no further recursion
        let sub_gram = QMat::identity(k);
        let records = run_adjacency(&slice, &sub_action, &sub_gram, None, sub_policy, stab_order)?;
        Ok(records
            .into_iter()
            .map(|r| {
                let mut dir = d0.clone();
                for (yk, n) in r.rep_vertex.iter().zip(&nullbasis) {
                    for (di, ni) in dir.iter_mut().zip(n) {
                        *di += yk * ni;
                    }
                }
                dir
            })
            .collect())
    }
}

fn run_adjacency(
    h: &HPolytope,
    action: &PermAction,
    gram: &QMat,
    seeds: Option<&[QVec]>,
    policy: RecursionPolicy,
    group_order: u128,
) -> Result<Vec<OrbitRecord>> {
    if h.len() != action.n_points() {
        return Err(Error::ActionMismatch(format!(
            "{} inequalities vs {} action points",
            h.len(),
            action.n_points()
        )));
    }
    let ctx = EngineCtx {
        h,
        action,
        gram,
        policy,
    };
    let mut bank = Bank {
        records: Vec::new(),
        by_key: HashMap::new(),
        canon_sets: HashMap::new(),
        queue: BinaryHeap::new(),
        in_flight: 0,
        group_order,
    };
    match seeds {
        Some(list) if !list.is_empty() => {
            for seed in list {
                let inc = incidence_set(h, seed).map_err(|_| Error::BadSeed("seed is not a vertex of the polytope".into()))?;
                if !inc.certified {
                    return Err(Error::BadSeed("seed is not a vertex of the polytope".into()));
                }
                ctx.insert(&mut bank, seed)?;
            }
        }
        _ => {
            let (v, _) = lp_vertex(h)?;
            ctx.insert(&mut bank, &v)?;
        }
    }
    let workers = ctx.policy.workers.max(1);
    let state = Mutex::new((bank, Ok(()) as Result<()>));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let job = {
                    let mut guard = state.lock().unwrap();
                    let (bank, status) = &mut *guard;
                    if status.is_err() {
                        return;
                    }
                    match bank.queue.pop() {
                        Some(std::cmp::Reverse((_, idx))) => {
                            bank.in_flight += 1;
                            Some((
                                bank.records[idx].rep_vertex.clone(),
                                bank.records[idx].tight.indices.clone(),
                            ))
                        }
                        None if bank.in_flight > 0 => None, // spin: more work may appear
                        None => return,
                    }
                };
                match job {
                    None => {
                        std::thread::yield_now();
                        continue;
                    }
                    Some((rep, tight)) => {
                        let result: Result<Vec<QVec>> = ctx
                            .cone_ray_directions(&rep, &tight)
                            .and_then(|rays| {
                                rays.iter()
                                    .map(|ray| edge_walk(ctx.h, &rep, ray))
                                    .collect()
                            });
                        let mut guard = state.lock().unwrap();
                        let (bank, status) = &mut *guard;
                        bank.in_flight -= 1;
                        match result {
                            Ok(neighbors) => {
                                for nb in &neighbors {
                                    if let Err(e) = ctx.insert(bank, nb) {
                                        *status = Err(e);
                                        break;
                                    }
                                }
                            }
                            Err(e) => *status = Err(e),
                        }
                    }
                }
            });
        }
    });
    let (mut bank, status) = state.into_inner().unwrap();
    status?;
    bank.records.sort_by(|a, b| {
        (&a.norm_sq, a.incidence_count, &a.key).cmp(&(&b.norm_sq, b.incidence_count, &b.key))
    });
    Ok(bank.records)
}

/// Complete list of vertex-orbit representatives of H under the action.
/// Inequality i of H must correspond to point i of the action.
pub fn enumerate_vertex_orbits(
    h: &HPolytope,
    action: &PermAction,
    gram: &QMat,
    seeds: Option<&[QVec]>,
    policy: RecursionPolicy,
) -> Result<Vec<OrbitRecord>> {
    let group_order = crate::symmetry::group_order(action);
    run_adjacency(h, action, gram, seeds, policy, group_order)
}

/// Σ |G| / |stab| over the records; errors on nondivisibility.
pub fn total_object_count(records: &[OrbitRecord], group_order: u128) -> Result<u128> {
    let mut total: u128 = 0;
    for r in records {
        if r.stabilizer_order == 0 || group_order % r.stabilizer_order != 0 {
            return Err(Error::Internal(
                "stabilizer order must divide the group order".into(),
            ));
        }
        total += group_order / r.stabilizer_order;
    }
    Ok(total)
}

/// Expands orbit representatives to the full vertex set (for oracle
/// comparisons at desk scale): the orbit of each tight set gives one vertex
/// per image.
pub fn expand_orbit_vertices(
    h: &HPolytope,
    action: &PermAction,
    records: &[OrbitRecord],
) -> Result<Vec<QVec>> {
    let mut out: Vec<QVec> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for r in records {
        let start = r.tight.indices.clone();
        let mut queue = vec![start.clone()];
        seen.insert(start);
        while let Some(cur) = queue.pop() {
            out.push(vertex_from_tight(h, &cur)?);
            for g in &action.perm_gens {
                let mut img: Vec<u32> = cur.iter().map(|&x| g[x as usize]).collect();
                img.sort_unstable();
                if seen.insert(img.clone()) {
                    queue.push(img);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Partitions contact-polar orbit records over L into (shared, additional)
/// index lists: shared records have closest-lattice-point distance² equal to
/// the vertex norm², additional strictly less.
pub fn split_shared_additional(
    records: &[OrbitRecord],
    l: &Lattice,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut shared = Vec::new();
    let mut additional = Vec::new();
    for (i, r) in records.iter().enumerate() {
        // ambient point of the representative (records store lattice coords)
        let m = l.ambient_dim();
        let mut x = vec![Rat::zero(); m];
        for (yi, brow) in r.rep_vertex.iter().zip(&l.basis.rows) {
            for (xj, bj) in x.iter_mut().zip(brow) {
                *xj += yi * bj;
            }
        }
        let (dist_sq, _) = closest_vectors(l, &x)?;
        if dist_sq == r.norm_sq {
            shared.push(i);
        } else if dist_sq < r.norm_sq {
            additional.push(i);
        } else {
            return Err(Error::Internal(
                "closest-point distance cannot exceed the vertex norm".into(),
            ));
        }
    }
    Ok((shared, additional))
}

/// Identity-only action on the inequalities of an H-polytope (normals as
/// points), for runs without symmetry.
pub fn trivial_action(h: &HPolytope) -> Result<PermAction> {
    let points: Vec<QVec> = h.ineqs.iter().map(|(a, _)| a.clone()).collect();
    let gens = crate::symmetry::MatrixGroupGens {
        mats: vec![QMat::identity(h.dim)],
    };
    crate::symmetry::action_on_points(&gens, &points, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::lattice::{build_named_lattice, shortest_vectors, NamedLattice};

    use crate::symmetry::{action_on_min, named_automorphism_gens};

    fn setup(name: NamedLattice) -> (Lattice, HPolytope, PermAction) {
        let l = build_named_lattice(&name).unwrap();
        let min = shortest_vectors(&l);
        let h = crate::polytope::contact_polar_from_min(&l, &min);
        let gens = named_automorphism_gens(&name).unwrap();
        let action = action_on_min(&gens, &min, &l).unwrap();
        (l, h, action)
    }

    #[test]
    fn a2_polar_has_one_orbit() {
        let (l, h, action) = setup(NamedLattice::An(2));
        let records =
            enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default())
                .unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!(r.incidence_count, 2);
        assert_eq!(r.stabilizer_order, 2); // orbit of 6 vertices under order 12
        assert_eq!(total_object_count(&records, 12).unwrap(), 6);
    }

    #[test]
    fn d4_polar_has_one_orbit_of_24() {
        let (l, h, action) = setup(NamedLattice::Dn(4));
        let records =
            enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default())
                .unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(total_object_count(&records, 1152).unwrap(), 24);
    }

    #[test]
    fn expansion_matches_dual_description_oracle() {
        for name in [NamedLattice::An(2), NamedLattice::An(3), NamedLattice::Dn(4)] {
            let (l, h, action) = setup(name);
            let records =
                enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default())
                    .unwrap();
            let mut expanded = expand_orbit_vertices(&h, &action, &records).unwrap();
            let mut direct = dual_description(&h).unwrap().vertices;
            expanded.sort();
            direct.sort();
            assert_eq!(expanded, direct);
        }
    }

    #[test]
    fn trivial_group_enumerates_every_vertex() {
        // unit cube in 3d
        let mut ineqs = Vec::new();
        for i in 0..3 {
            let mut a = vec![Rat::zero(); 3];
            a[i] = rat(1);
            ineqs.push((a.clone(), rat(1)));
            let neg: QVec = a.iter().map(|x| -x).collect();
            ineqs.push((neg, rat(0)));
        }
        let h = HPolytope::new(ineqs, 3).unwrap();
        let action = trivial_action(&h).unwrap();
        let records =
            enumerate_vertex_orbits(&h, &action, &QMat::identity(3), None, RecursionPolicy::default())
                .unwrap();
        assert_eq!(records.len(), 8);
        assert!(records.iter().all(|r| r.stabilizer_order == 1));
    }

    #[test]
    fn worker_counts_give_identical_output() {
        let (l, h, action) = setup(NamedLattice::Dn(4));
        let mut p1 = RecursionPolicy::default();
        p1.workers = 1;
        let mut p4 = RecursionPolicy::default();
        p4.workers = 4;
        let r1 = enumerate_vertex_orbits(&h, &action, &l.gram, None, p1).unwrap();
        let r4 = enumerate_vertex_orbits(&h, &action, &l.gram, None, p4).unwrap();
        assert_eq!(r1.len(), r4.len());
        for (a, b) in r1.iter().zip(&r4) {
            assert_eq!(a.rep_vertex, b.rep_vertex);
            assert_eq!(a.tight.indices, b.tight.indices);
            assert_eq!(a.stabilizer_order, b.stabilizer_order);
        }
    }

    #[test]
    fn bad_seed_is_rejected() {
        let (l, h, action) = setup(NamedLattice::An(2));
        let center = vec![Rat::zero(); 2];
        let err = enumerate_vertex_orbits(
            &h,
            &action,
            &l.gram,
            Some(&[center]),
            RecursionPolicy::default(),
        );
        assert!(matches!(err, Err(Error::BadSeed(_))));
    }

    #[test]
    fn seeding_with_a_true_vertex_works() {
        let (l, h, action) = setup(NamedLattice::An(2));
        let (v, _) = lp_vertex(&h).unwrap();
        let records = enumerate_vertex_orbits(
            &h,
            &action,
            &l.gram,
            Some(&[v]),
            RecursionPolicy::default(),
        )
        .unwrap();
        assert_eq!(records.len(), 1);
    }

    #[test]
    fn root_lattice_vertices_are_all_shared() {
        for name in [NamedLattice::An(2), NamedLattice::Dn(4)] {
            let (l, h, action) = setup(name);
            let records =
                enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default())
                    .unwrap();
            let (shared, additional) = split_shared_additional(&records, &l).unwrap();
            assert_eq!(shared.len(), records.len());
            assert!(additional.is_empty());
        }
    }

    #[test]
    fn nondivisible_stabilizer_is_internal_error() {
        let (l, h, action) = setup(NamedLattice::An(2));
        let mut records =
            enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default())
                .unwrap();
        records[0].stabilizer_order = 5;
        assert!(matches!(
            total_object_count(&records, 12),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn recursion_path_agrees_with_direct_treatment() {
        // force the recursion path on D4 (24 inequalities, dim 4) by setting
        // the direct thresholds below the instance size
        let (l, h, action) = setup(NamedLattice::Dn(4));
        let mut policy = RecursionPolicy::default();
        policy.direct_threshold = 4;
        policy.direct_dim = 0;
        let rec = enumerate_vertex_orbits(&h, &action, &l.gram, None, policy).unwrap();
        let direct =
            enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default())
                .unwrap();
        assert_eq!(rec.len(), direct.len());
        for (a, b) in rec.iter().zip(&direct) {
            assert_eq!(a.rep_vertex, b.rep_vertex);
            assert_eq!(a.stabilizer_order, b.stabilizer_order);
        }
    }

    #[test]
    #[ignore] // nightly tier: W(E8) on 240 inequalities, ~minutes
    fn e8_run_has_two_orbits_totalling_19440() {
        let (l, h, action) = setup(NamedLattice::En(8));
        let records =
            enumerate_vertex_orbits(&h, &action, &l.gram, None, RecursionPolicy::default())
                .unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(
            total_object_count(&records, 696_729_600).unwrap(),
            19_440
        );
        let (shared, additional) = split_shared_additional(&records, &l).unwrap();
        assert_eq!(shared.len(), 2);
        assert!(additional.is_empty());
    }
}
