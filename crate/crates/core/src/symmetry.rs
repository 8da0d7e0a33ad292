//! Matrix symmetry groups acting on shortest-vector sets, and permutation
//! group machinery: Schreier–Sims stabilizer chains, orbits, group order,
//! invariant set keys, and backtracking set-stabilizer / set-transporter
//! searches with inner-product refinement.

use std::collections::{HashMap, HashSet};

use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{QMat, Rat};
use crate::lattice::{Lattice, MinSet};
use crate::{Error, Result};

pub type Perm = Vec<u32>;

pub fn p_identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

pub fn p_is_identity(p: &Perm) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// (a ∘ b)(x) = a(b(x)).
pub fn p_compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn p_inverse(p: &Perm) -> Perm {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// Generators of a matrix group acting on ambient row vectors: v ↦ v·M.
#[derive(Clone)]
pub struct MatrixGroupGens {
    pub mats: Vec<QMat>,
}

/// Parses the group file format: header "G n k", then k n×n matrices of
/// rationals, row-major.
pub fn parse_group_file(text: &str) -> Result<MatrixGroupGens> {
    let mut toks = text.split_whitespace();
    if toks.next() != Some("G") {
        return Err(Error::Parse("group file must start with 'G n k'".into()));
    }
    let n: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad dimension in group header".into()))?;
    let k: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad generator count in group header".into()))?;
    let mut mats = Vec::with_capacity(k);
    for _ in 0..k {
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                let tok = toks
                    .next()
                    .ok_or_else(|| Error::Parse("group file truncated".into()))?;
                row.push(crate::exactalg::parse_rat(tok)?);
            }
            rows.push(row);
        }
        mats.push(QMat { rows });
    }
    if toks.next().is_some() {
        return Err(Error::Parse("trailing tokens in group file".into()));
    }
    Ok(MatrixGroupGens { mats })
}

pub fn write_group_file(g: &MatrixGroupGens) -> String {
    let n = g.mats.first().map_or(0, |m| m.nrows());
    let mut out = format!("G {} {}\n", n, g.mats.len());
    for m in &g.mats {
        for row in &m.rows {
            let line: Vec<String> = row.iter().map(crate::exactalg::rat_str).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

impl MatrixGroupGens {
    /// Checks that every generator is orthogonal for the ambient inner
    /// product (M·Mᵀ = I) and maps the lattice basis into the lattice.
    pub fn verify(&self, l: &Lattice) -> Result<()> {
        let m = l.ambient_dim();
        for (gi, mat) in self.mats.iter().enumerate() {
            if mat.nrows() != m || mat.ncols() != m {
                return Err(Error::ActionMismatch(format!(
                    "generator {gi} is {}×{}, ambient dimension is {m}",
                    mat.nrows(),
                    mat.ncols()
                )));
            }
            let prod = mat.mul(&mat.transpose())?;
            if prod != QMat::identity(m) {
                return Err(Error::NotASymmetry(gi));
            }
            for row in &l.basis.rows {
                let image = mat.transpose().mul_vec(row)?; // (v·M)ᵀ = Mᵀ·vᵀ
                if l.coords_of(&image)?.is_none() {
                    return Err(Error::NotASymmetry(gi));
                }
            }
        }
        Ok(())
    }
}

/// A permutation action of matrix generators on a finite point set of ambient
/// vectors, stored over a common integer scaling for fast exact inner
/// products.
pub struct PermAction {
    /// point i = points_num[i] / points_den
    pub points_num: Vec<Vec<i64>>,
    pub points_den: i64,
    /// ambient inner-product denominator (⟨x,y⟩ = Σxᵢyᵢ/s)
    pub ip_denom: i64,
    pub perm_gens: Vec<Perm>,
}

impl PermAction {
    pub fn n_points(&self) -> usize {
        self.points_num.len()
    }

    /// Scaled inner product Σ points_num[i]ₖ·points_num[j]ₖ; proportional to
    /// the true inner product by the fixed factor den²·s.
    pub fn ip_scaled(&self, i: u32, j: u32) -> i64 {
        let a = &self.points_num[i as usize];
        let b = &self.points_num[j as usize];
        let mut s: i128 = 0;
        for (x, y) in a.iter().zip(b) {
            s += (*x as i128) * (*y as i128);
        }
        s.try_into().expect("scaled inner product fits i64")
    }

    /// True inner product of points i and j.
    pub fn ip(&self, i: u32, j: u32) -> Rat {
        crate::exactalg::frac(
            self.ip_scaled(i, j),
            self.points_den * self.points_den * self.ip_denom,
        )
    }
}

fn lcm_i64(a: i64, b: i64) -> Option<i64> {
    if a == 0 || b == 0 {
        return None;
    }
    let g = num::integer::gcd(a, b);
    (a / g).checked_mul(b)
}

/// Computes the exact permutation induced by each matrix generator on the
/// given point set (ambient vectors). Fails with NotASymmetry when an image
/// falls outside the set.
pub fn action_on_points(gens: &MatrixGroupGens, points: &[Vec<Rat>], ip_denom: i64) -> Result<PermAction> {
    let npts = points.len();
    let dim = points.first().map_or(0, |p| p.len());
    // common integer scaling of the points
    let mut den: i64 = 1;
    for p in points {
        for x in p {
            den = lcm_i64(den, x.denom().to_i64().ok_or_else(|| {
                Error::Internal("point denominator out of range".into())
            })?)
            .ok_or_else(|| Error::Internal("point denominator overflow".into()))?;
        }
    }
    let dbig = num::BigInt::from(den);
    let mut points_num: Vec<Vec<i64>> = Vec::with_capacity(npts);
    for p in points {
        let row: Option<Vec<i64>> = p
            .iter()
            .map(|x| (x.numer() * &dbig / x.denom()).to_i64())
            .collect();
        points_num.push(row.ok_or_else(|| Error::Internal("point numerator overflow".into()))?);
    }
    let index: HashMap<&[i64], u32> = points_num
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i as u32))
        .collect();
    if index.len() != npts {
        return Err(Error::ActionMismatch("duplicate points in the set".into()));
    }
    let mut perm_gens = Vec::with_capacity(gens.mats.len());
    for (gi, mat) in gens.mats.iter().enumerate() {
        // scale the matrix to integers
        let mut dm: i64 = 1;
        for row in &mat.rows {
            for x in row {
                dm = lcm_i64(dm, x.denom().to_i64().ok_or(Error::NotASymmetry(gi))?)
                    .ok_or(Error::NotASymmetry(gi))?;
            }
        }
        let dmb = num::BigInt::from(dm);
        let mut mint: Vec<Vec<i64>> = Vec::with_capacity(dim);
        for row in &mat.rows {
            let r: Option<Vec<i64>> = row.iter().map(|x| (x.numer() * &dmb / x.denom()).to_i64()).collect();
            mint.push(r.ok_or(Error::NotASymmetry(gi))?);
        }
        let mut perm = vec![0u32; npts];
        let mut seen = vec![false; npts];
        for (i, p) in points_num.iter().enumerate() {
            // y = (p · M_int) / dm
            let mut img = Vec::with_capacity(dim);
            for j in 0..dim {
                let mut s: i128 = 0;
                for (k, &pk) in p.iter().enumerate() {
                    if pk != 0 {
                        s += (pk as i128) * (mint[k][j] as i128);
                    }
                }
                if s % (dm as i128) != 0 {
                    return Err(Error::NotASymmetry(gi));
                }
                let v = s / (dm as i128);
                img.push(i64::try_from(v).map_err(|_| Error::NotASymmetry(gi))?);
            }
            match index.get(img.as_slice()) {
                Some(&t) => {
                    perm[i] = t;
                    seen[t as usize] = true;
                }
                None => return Err(Error::NotASymmetry(gi)),
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::NotASymmetry(gi));
        }
        perm_gens.push(perm);
    }
    Ok(PermAction {
        points_num,
        points_den: den,
        ip_denom,
        perm_gens,
    })
}

/// Spec-named wrapper: the action of the generators on Min L.
pub fn action_on_min(gens: &MatrixGroupGens, min: &MinSet, l: &Lattice) -> Result<PermAction> {
    let points = min.ambient_all(l);
    action_on_points(gens, &points, l.ip_denom)
}

/// The orbit of a point under the generated group, sorted.
pub fn orbit(action: &PermAction, point: u32) -> Vec<u32> {
    orbit_of(&action.perm_gens, action.n_points(), point)
}

pub fn orbit_of(gens: &[Perm], _n: usize, point: u32) -> Vec<u32> {
    let mut seen = HashSet::from([point]);
    let mut queue = vec![point];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = g[x as usize];
            if seen.insert(y) {
                queue.push(y);
            }
        }
    }
    let mut v: Vec<u32> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

// ---------------------------------------------------------------------------
// stabilizer chains

struct Level {
    point: u32,
    /// generators first reached at this level, each followed by its inverse;
    /// the level subgroup is generated by the gens of this and all deeper levels
    gens: Vec<Perm>,
    /// BFS tree: point → (parent, gen level, gen index)
    tree: HashMap<u32, (u32, u32, u32)>,
}

impl Level {
    fn new(point: u32) -> Self {
        let mut tree = HashMap::new();
        tree.insert(point, (point, u32::MAX, u32::MAX));
        Level {
            point,
            gens: Vec::new(),
            tree,
        }
    }
}

pub struct Bsgs {
    pub n: usize,
    levels: Vec<Level>,
}

impl Bsgs {
    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.tree.len() as u128)
            .product()
    }

    pub fn basic_orbit(&self, lev: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.levels[lev].tree.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level_point(&self, lev: usize) -> u32 {
        self.levels[lev].point
    }

    /// Transversal element at a level mapping the base point to x.
    pub fn transversal(&self, lev: usize, x: u32) -> Option<Perm> {
        if !self.levels[lev].tree.contains_key(&x) {
            return None;
        }
        Some(self.rep(lev, x))
    }

    /// Generators of the level subgroup (stabilizing the first `lev` base
    /// points): the gens of this level and all deeper levels.
    pub fn level_gens(&self, lev: usize) -> Vec<Perm> {
        self.levels[lev.min(self.levels.len())..]
            .iter()
            .flat_map(|l| l.gens.iter().cloned())
            .collect()
    }

    /// Transversal element u at a level with u(base point) = x.
    fn rep(&self, lev: usize, x: u32) -> Perm {
        let mut word = Vec::new();
        let mut cur = x;
        loop {
            let &(parent, gl, gi) = &self.levels[lev].tree[&cur];
            if gl == u32::MAX {
                break;
            }
            word.push((gl, gi));
            cur = parent;
        }
        let mut u = p_identity(self.n);
        for &(gl, gi) in word.iter().rev() {
            let g = &self.levels[gl as usize].gens[gi as usize];
            for v in u.iter_mut() {
                *v = g[*v as usize];
            }
        }
        u
    }

    /// Rebuilds the BFS tree at a level from the cumulative generator set of
    /// that level and all deeper ones.
    fn rebuild_tree(&mut self, lev: usize) {
        let point = self.levels[lev].point;
        let mut tree = HashMap::new();
        tree.insert(point, (point, u32::MAX, u32::MAX));
        let mut frontier = vec![point];
        while let Some(x) = frontier.pop() {
            for gl in lev..self.levels.len() {
                for (gi, g) in self.levels[gl].gens.iter().enumerate() {
                    let y = g[x as usize];
                    if !tree.contains_key(&y) {
                        tree.insert(y, (x, gl as u32, gi as u32));
                        frontier.push(y);
                    }
                }
            }
        }
        self.levels[lev].tree = tree;
    }

    /// Sifts g through the chain; returns the residue and the level reached.
    pub fn sift(&self, mut g: Perm) -> (Perm, usize) {
        for lev in 0..self.levels.len() {
            let x = g[self.levels[lev].point as usize];
            if !self.levels[lev].tree.contains_key(&x) {
                return (g, lev);
            }
            let u = self.rep(lev, x);
            let uinv = p_inverse(&u);
            g = p_compose(&uinv, &g);
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (res, lev) = self.sift(g.clone());
        lev == self.levels.len() && p_is_identity(&res)
    }

    /// Adds a sifted residue at a level and rebuilds every affected tree
    /// (levels 0..=lev — the new gen is in each of their generating sets).
    fn add_gen(&mut self, g: Perm, lev: usize, base_hint: &[u32]) {
        if lev == self.levels.len() {
            let b = base_hint
                .iter()
                .copied()
                .find(|&b| g[b as usize] != b)
                .unwrap_or_else(|| {
                    g.iter()
                        .enumerate()
                        .find(|(i, &x)| *i as u32 != x)
                        .map(|(i, _)| i as u32)
                        .expect("non-identity residue moves a point")
                });
            self.levels.push(Level::new(b));
        }
        let ginv = p_inverse(&g);
        self.levels[lev].gens.push(g);
        self.levels[lev].gens.push(ginv);
        for l in (0..=lev).rev() {
            self.rebuild_tree(l);
        }
    }
}

/// Runs the Schreier-generator fixpoint on a chain: on return every Schreier
/// generator of every level sifts to the identity, which certifies the order.
fn close_chain(chain: &mut Bsgs, base_hint: &[u32]) {
    let mut l = 0usize;
    while l < chain.levels.len() {
        let pts: Vec<u32> = chain.levels[l].tree.keys().copied().collect();
        let gens_l = chain.level_gens(l);
        let mut dirty = false;
        'outer: for &x in &pts {
            let u = chain.rep(l, x);
            for h in &gens_l {
                let y = h[x as usize];
                let v = chain.rep(l, y);
                let schreier = p_compose(&p_inverse(&v), &p_compose(h, &u));
                let (res, rl) = chain.sift(schreier);
                if !p_is_identity(&res) {
                    let sizes: Vec<usize> =
                        chain.levels[..l].iter().map(|lv| lv.tree.len()).collect();
                    chain.add_gen(res, rl, base_hint);
                    // restart from the shallowest level whose orbit changed
                    let changed = chain.levels[..l]
                        .iter()
                        .enumerate()
                        .find(|(i, lv)| lv.tree.len() != sizes[*i])
                        .map(|(i, _)| i);
                    l = changed.unwrap_or(l);
                    dirty = true;
                    break 'outer;
                }
            }
        }
        if !dirty {
            l += 1;
        }
    }
}

/// Deterministic Schreier–Sims (processes every Schreier generator); suited
/// to small point counts.
pub fn bsgs_deterministic(gens: &[Perm], n: usize, base_hint: &[u32]) -> Bsgs {
    let mut chain = Bsgs {
        n,
        levels: Vec::new(),
    };
    for g in gens {
        let (res, lev) = chain.sift(g.clone());
        if !p_is_identity(&res) {
            chain.add_gen(res, lev, base_hint);
        }
    }
    close_chain(&mut chain, base_hint);
    chain
}

/// Randomized Schreier–Sims with product replacement. The transversal-length
/// product is always a lower bound on the true order, so `known_order` (when
/// given) provides a rigorous early stop; otherwise the chain is accepted
/// after a quiet streak plus a deterministic battery of sifted products.
pub fn bsgs_randomized(
    gens: &[Perm],
    n: usize,
    base_hint: &[u32],
    known_order: Option<u128>,
) -> Bsgs {
    let mut chain = Bsgs {
        n,
        levels: Vec::new(),
    };
    for g in gens {
        let (res, lev) = chain.sift(g.clone());
        if !p_is_identity(&res) {
            chain.add_gen(res, lev, base_hint);
        }
    }
    if gens.is_empty() || chain.levels.is_empty() {
        if let Some(k) = known_order {
            assert_eq!(k, chain.order(), "known order mismatch");
        }
        return chain;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b51);
    let mut state: Vec<Perm> = Vec::new();
    for g in gens {
        state.push(g.clone());
        state.push(p_inverse(g));
    }
    while state.len() < 10 {
        let c = state[state.len() % gens.len().max(1)].clone();
        state.push(c);
    }
    let mut quiet = 0usize;
    let quiet_target = 48;
    loop {
        if let Some(k) = known_order {
            if chain.order() == k {
                break;
            }
            assert!(chain.order() < k, "transversal product exceeds known order");
        }
        let i = rng.gen_range(0..state.len());
        let mut j = rng.gen_range(0..state.len());
        while j == i {
            j = rng.gen_range(0..state.len());
        }
        let prod = p_compose(&state[i], &state[j]);
        state[i] = prod.clone();
        let (res, lev) = chain.sift(prod);
        if p_is_identity(&res) {
            quiet += 1;
            if quiet >= quiet_target && known_order.is_none() {
                break;
            }
        } else {
            chain.add_gen(res, lev, base_hint);
            quiet = 0;
        }
    }
    // deterministic verification battery: products of the original
    // generators in a fixed pseudorandom schedule must all sift to identity
    let mut vrng = ChaCha8Rng::seed_from_u64(0x7e57);
    let mut acc = p_identity(n);
    for _ in 0..64 {
        let g = &gens[vrng.gen_range(0..gens.len())];
        acc = if vrng.gen_bool(0.5) {
            p_compose(&acc, g)
        } else {
            p_compose(g, &acc)
        };
        assert!(
            chain.contains(&acc),
            "stabilizer chain failed deterministic verification"
        );
    }
    chain
}

const DETERMINISTIC_SS_LIMIT: usize = 2000;

pub fn build_bsgs(gens: &[Perm], n: usize, base_hint: &[u32], known_order: Option<u128>) -> Bsgs {
    if n <= DETERMINISTIC_SS_LIMIT {
        let chain = bsgs_deterministic(gens, n, base_hint);
        if let Some(k) = known_order {
            assert_eq!(chain.order(), k, "known order mismatch");
        }
        chain
    } else {
        bsgs_randomized(gens, n, base_hint, known_order)
    }
}

/// Exact order of the group generated by the action's permutations.
pub fn group_order(action: &PermAction) -> u128 {
    build_bsgs(&action.perm_gens, action.n_points(), &[], None).order()
}

// ---------------------------------------------------------------------------
// named automorphism groups

fn perm_matrix(n: usize, img: &[(usize, usize)]) -> QMat {
    // identity with rows i moved to positions j for each (i, j)
    let mut m = QMat::identity(n);
    for &(i, j) in img {
        for k in 0..n {
            m.rows[i][k] = if k == j { Rat::one() } else { Rat::zero() };
        }
    }
    m
}

fn neg_identity(n: usize) -> QMat {
    let mut m = QMat::identity(n);
    for i in 0..n {
        m.rows[i][i] = -Rat::one();
    }
    m
}

fn flip_first(n: usize) -> QMat {
    let mut m = QMat::identity(n);
    m.rows[0][0] = -Rat::one();
    m
}

fn coord_swap_and_cycle(n: usize) -> Vec<QMat> {
    let mut out = Vec::new();
    if n >= 2 {
        out.push(perm_matrix(n, &[(0, 1), (1, 0)]));
        let cycle: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        out.push(perm_matrix(n, &cycle));
    }
    out
}

/// Generators of the full automorphism group of a named lattice, as ambient
/// matrices. For the root lattices these are signed permutations, Weyl
/// reflections in the simple roots, and the extra D4 triality; the Leech
/// lattice generators are bundled.
pub fn named_automorphism_gens(name: &crate::lattice::NamedLattice) -> Result<MatrixGroupGens> {
    use crate::lattice::NamedLattice::*;
    let mats = match name {
        Zn(n) => {
            let mut m = coord_swap_and_cycle(*n);
            m.push(flip_first(*n));
            m
        }
        An(n) => {
            // coordinate permutations of the ambient R^{n+1}, plus -I
            let mut m = coord_swap_and_cycle(n + 1);
            m.push(neg_identity(n + 1));
            m
        }
        Dn(n) => {
            // single sign flips shift the coordinate sum by an even amount,
            // so all signed permutations preserve Dn
            let mut m = coord_swap_and_cycle(*n);
            m.push(flip_first(*n));
            if *n == 4 {
                // triality: (1/2)·Hadamard
                let h = QMat::from_i64(&[
                    &[1, 1, 1, 1],
                    &[1, 1, -1, -1],
                    &[1, -1, 1, -1],
                    &[1, -1, -1, 1],
                ]);
                let half = crate::exactalg::frac(1, 2);
                let mut hh = h;
                for row in hh.rows.iter_mut() {
                    for x in row.iter_mut() {
                        *x = &*x * &half;
                    }
                }
                m.push(hh);
            }
            m
        }
        En(_) => {
            // Weyl reflections in the simple roots (the basis rows), plus -I
            let l = crate::lattice::build_named_lattice(name)?;
            let dim = l.ambient_dim();
            let mut m = Vec::new();
            for root in &l.basis.rows {
                // roots have norm 2: s(v) = v - <v,root>·root
                let mut refl = QMat::identity(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        refl.rows[i][j] = &refl.rows[i][j] - &(&root[i] * &root[j]);
                    }
                }
                m.push(refl);
            }
            m.push(neg_identity(dim));
            m
        }
        LeechMOG => {
            return parse_group_file(crate::golay::bundled_co0_group());
        }
    };
    Ok(MatrixGroupGens { mats })
}

// ---------------------------------------------------------------------------
// invariant set keys

/// Isomorphism-invariant fingerprint of a point subset: size, multiset of
/// pairwise scaled inner products, and multiset of per-point inner-product
/// profiles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetKey {
    pub size: usize,
    pub pair_ips: Vec<(i64, u32)>,
    pub profiles: Vec<(Vec<(i64, u32)>, u32)>,
}

fn multiset(mut v: Vec<i64>) -> Vec<(i64, u32)> {
    v.sort_unstable();
    let mut out: Vec<(i64, u32)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

pub fn set_key(action: &PermAction, s: &[u32]) -> SetKey {
    let mut pair = Vec::with_capacity(s.len() * (s.len() + 1) / 2);
    let mut profs: Vec<Vec<(i64, u32)>> = Vec::with_capacity(s.len());
    for (ii, &i) in s.iter().enumerate() {
        let mut prof = Vec::with_capacity(s.len());
        for (jj, &j) in s.iter().enumerate() {
            let ip = action.ip_scaled(i, j);
            prof.push(ip);
            if jj >= ii {
                pair.push(ip);
            }
        }
        profs.push(multiset(prof));
    }
    profs.sort();
    let mut profiles: Vec<(Vec<(i64, u32)>, u32)> = Vec::new();
    for p in profs {
        match profiles.last_mut() {
            Some((q, c)) if *q == p => *c += 1,
            _ => profiles.push((p, 1)),
        }
    }
    SetKey {
        size: s.len(),
        pair_ips: multiset(pair),
        profiles,
    }
}

// ---------------------------------------------------------------------------
// backtracking set stabilizer / transporter

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

struct Search<'a> {
    action: &'a PermAction,
    bsgs: &'a Bsgs,
    s: Vec<u32>,
    t: Vec<u32>,
    in_s: Vec<bool>,
    in_t: Vec<bool>,
    /// profile of a point against S (for base points) and against T (for
    /// candidate images), memoized
    prof_s: HashMap<u32, Vec<(i64, u32)>>,
    prof_t: HashMap<u32, Vec<(i64, u32)>>,
    budget: u64,
    nodes: u64,
}

enum SearchGoal {
    /// find one element mapping S to T
    Transporter,
    /// find generators of the setwise stabilizer (S = T)
    Stabilizer,
}

struct SearchState {
    /// chosen images y_1..y_i of the base prefix
    images: Vec<u32>,
    /// prefix permutation u_1∘…∘u_i
    prefix: Perm,
    /// whether every choice so far was the identity choice y_j = b_j
    on_identity_path: bool,
}

struct Found {
    elements: Vec<Perm>,
    /// known subgroup of the stabilizer, rebuilt as elements arrive
    k_chain: Option<Bsgs>,
}

impl<'a> Search<'a> {
    fn profile(&mut self, p: u32, against_t: bool) -> &Vec<(i64, u32)> {
        let (cache, set) = if against_t {
            (&mut self.prof_t, &self.t)
        } else {
            (&mut self.prof_s, &self.s)
        };
        cache.entry(p).or_insert_with(|| {
            multiset(set.iter().map(|&q| {
                let a = &self.action.points_num[p as usize];
                let b = &self.action.points_num[q as usize];
                let mut s: i128 = 0;
                for (x, y) in a.iter().zip(b) {
                    s += (*x as i128) * (*y as i128);
                }
                s.try_into().expect("scaled inner product fits i64")
            }).collect())
        })
    }

    /// Candidate filter for mapping base point b (level i) to y given the
    /// already-chosen images.
    fn candidate_ok(&mut self, b: u32, y: u32, images: &[u32], base: &[u32]) -> bool {
        if self.in_s[b as usize] != self.in_t[y as usize] {
            return false;
        }
        if self.action.ip_scaled(b, b) != self.action.ip_scaled(y, y) {
            return false;
        }
        for (j, &yj) in images.iter().enumerate() {
            if self.action.ip_scaled(b, base[j]) != self.action.ip_scaled(y, yj) {
                return false;
            }
        }
        if self.in_s[b as usize] {
            let pb = self.profile(b, false).clone();
            let py = self.profile(y, true);
            if pb != *py {
                return false;
            }
        }
        true
    }

    fn maps_s_to_t(&self, g: &Perm) -> bool {
        let mut img: Vec<u32> = self.s.iter().map(|&x| g[x as usize]).collect();
        img.sort_unstable();
        img == self.t
    }

    fn dfs(
        &mut self,
        lev: usize,
        state: &SearchState,
        goal: &SearchGoal,
        found: &mut Found,
    ) -> Result<bool> {
        if lev == self.bsgs.num_levels() {
            let g = state.prefix.clone();
            if !self.maps_s_to_t(&g) {
                return Ok(false);
            }
            match goal {
                SearchGoal::Transporter => {
                    found.elements.push(g);
                    Ok(true)
                }
                SearchGoal::Stabilizer => {
                    if !p_is_identity(&g) {
                        let is_new = found
                            .k_chain
                            .as_ref()
                            .map_or(true, |c| !c.contains(&g));
                        if is_new {
                            found.elements.push(g);
                            self.rebuild_k(found);
                        }
                    }
                    Ok(false)
                }
            }
        } else {
            let b = self.bsgs.level_point(lev);
            let base = self.bsgs.base();
            let orbit_pts = self.bsgs.basic_orbit(lev);
            // candidates sorted ascending by actual image for the orbit-min rules
            let mut cands: Vec<(u32, u32)> = orbit_pts
                .iter()
                .map(|&x| (state.prefix[x as usize], x))
                .collect();
            cands.sort_unstable();
            let mut processed_roots: Vec<u32> = Vec::new();
            for (y, x) in cands {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::Undecided(self.budget));
                }
                if !self.candidate_ok(b, y, &state.images, &base) {
                    continue;
                }
                if matches!(goal, SearchGoal::Stabilizer) {
                    // root rule: skip y whose K-orbit meets a processed root
                    if lev == 0 {
                        if let Some(kc) = &found.k_chain {
                            let kgens = kc.level_gens(0);
                            let orb = orbit_of(&kgens, self.action.n_points(), y);
                            if orb.iter().any(|p| processed_roots.contains(p)) {
                                processed_roots.push(y);
                                continue;
                            }
                        }
                        processed_roots.push(y);
                    } else if state.on_identity_path {
                        // identity-path rule: skip y not minimal in its orbit
                        // under the pointwise stabilizer of b_1..b_{i-1} in K
                        if let Some(kc) = &found.k_chain {
                            if lev < kc.num_levels() {
                                let kgens = kc.level_gens(lev);
                                if !kgens.is_empty() {
                                    let orb =
                                        orbit_of(&kgens, self.action.n_points(), y);
                                    if orb[0] < y {
                                        continue;
                                    }
                                }
                            }
                        }
                    }
                }
                let u = self
                    .bsgs
                    .transversal(lev, x)
                    .expect("orbit point has a transversal");
                let mut images = state.images.clone();
                images.push(y);
                let next = SearchState {
                    images,
                    prefix: p_compose(&state.prefix, &u),
                    on_identity_path: state.on_identity_path && y == b,
                };
                if self.dfs(lev + 1, &next, goal, found)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }

    fn rebuild_k(&self, found: &mut Found) {
        // K's chain is forced onto the same base as the search so its level
        // subgroups align with the identity-path pruning rule
        let base = self.bsgs.base();
        let chain = build_forced_base(&found.elements, self.action.n_points(), &base);
        found.k_chain = Some(chain);
    }
}

/// Builds a stabilizer chain whose base starts with exactly the given points
/// in order (levels with trivial orbits included), so level subgroups align
/// with an enclosing group's chain.
fn build_forced_base(gens: &[Perm], n: usize, base: &[u32]) -> Bsgs {
    let mut chain = Bsgs {
        n,
        levels: base.iter().map(|&b| Level::new(b)).collect(),
    };
    for g in gens {
        let (res, lev) = chain.sift(g.clone());
        if !p_is_identity(&res) {
            chain.add_gen(res, lev, &[]);
        }
    }
    close_chain(&mut chain, &[]);
    chain
}

fn base_hint_for_set(s: &[u32]) -> Vec<u32> {
    s.to_vec()
}

/// The full setwise stabilizer of S: generators and exact order.
/// `bsgs` must be a chain for the whole group whose base starts inside S
/// (see `stabilizer_chain_for_set`).
pub fn set_stabilizer(
    action: &PermAction,
    bsgs: &Bsgs,
    s: &[u32],
    budget: u64,
) -> Result<(Vec<Perm>, u128)> {
    let mut s_sorted = s.to_vec();
    s_sorted.sort_unstable();
    let n = action.n_points();
    let mut in_s = vec![false; n];
    for &i in &s_sorted {
        in_s[i as usize] = true;
    }
    let mut search = Search {
        action,
        bsgs,
        s: s_sorted.clone(),
        t: s_sorted.clone(),
        in_s: in_s.clone(),
        in_t: in_s,
        prof_s: HashMap::new(),
        prof_t: HashMap::new(),
        budget,
        nodes: 0,
    };
    let mut found = Found {
        elements: Vec::new(),
        k_chain: None,
    };
    let state = SearchState {
        images: Vec::new(),
        prefix: p_identity(n),
        on_identity_path: true,
    };
    search.dfs(0, &state, &SearchGoal::Stabilizer, &mut found)?;
    let order = match &found.k_chain {
        Some(c) => c.order(),
        None => 1,
    };
    Ok((found.elements, order))
}

/// An element mapping S to T, a certified None when no such element exists,
/// or Undecided when the budget runs out. SetKeys are compared first.
pub fn set_transporter(
    action: &PermAction,
    bsgs: &Bsgs,
    s: &[u32],
    t: &[u32],
    budget: u64,
) -> Result<Option<Perm>> {
    if s.len() != t.len() {
        return Ok(None);
    }
    if set_key(action, s) != set_key(action, t) {
        return Ok(None);
    }
    let mut s_sorted = s.to_vec();
    s_sorted.sort_unstable();
    let mut t_sorted = t.to_vec();
    t_sorted.sort_unstable();
    let n = action.n_points();
    let mut in_s = vec![false; n];
    let mut in_t = vec![false; n];
    for &i in &s_sorted {
        in_s[i as usize] = true;
    }
    for &i in &t_sorted {
        in_t[i as usize] = true;
    }
    let mut search = Search {
        action,
        bsgs,
        s: s_sorted,
        t: t_sorted,
        in_s,
        in_t,
        prof_s: HashMap::new(),
        prof_t: HashMap::new(),
        budget,
        nodes: 0,
    };
    let mut found = Found {
        elements: Vec::new(),
        k_chain: None,
    };
    let state = SearchState {
        images: Vec::new(),
        prefix: p_identity(n),
        on_identity_path: true,
    };
    let hit = search.dfs(0, &state, &SearchGoal::Transporter, &mut found)?;
    if hit {
        Ok(Some(found.elements.pop().unwrap()))
    } else {
        Ok(None)
    }
}

/// Builds a stabilizer chain for the whole group with base points preferring
/// the given set, as required by the set searches.
pub fn stabilizer_chain_for_set(
    action: &PermAction,
    s: &[u32],
    known_order: Option<u128>,
) -> Bsgs {
    build_bsgs(
        &action.perm_gens,
        action.n_points(),
        &base_hint_for_set(s),
        known_order,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{qvec_from_i64, rat};
    use crate::lattice::{build_named_lattice, shortest_vectors, NamedLattice};

    /// W(A2) as matrices on the 3-dim ambient space of A2: coordinate
    /// permutations (S3) and -I.
    fn wa2() -> MatrixGroupGens {
        let swap01 = QMat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let cycle = QMat::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let neg = QMat::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        MatrixGroupGens {
            mats: vec![swap01, cycle, neg],
        }
    }

    fn hexagon_action() -> PermAction {
        let a2 = build_named_lattice(&NamedLattice::An(2)).unwrap();
        let min = shortest_vectors(&a2);
        assert_eq!(min.len(), 6);
        action_on_min(&wa2(), &min, &a2).unwrap()
    }

    #[test]
    fn wa2_is_a_symmetry_group_of_order_12() {
        let a2 = build_named_lattice(&NamedLattice::An(2)).unwrap();
        wa2().verify(&a2).unwrap();
        let action = hexagon_action();
        assert_eq!(group_order(&action), 12);
    }

    #[test]
    fn negation_action() {
        let a2 = build_named_lattice(&NamedLattice::An(2)).unwrap();
        let min = shortest_vectors(&a2);
        let neg = MatrixGroupGens {
            mats: vec![QMat::from_i64(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]])],
        };
        let action = action_on_min(&neg, &min, &a2).unwrap();
        assert_eq!(group_order(&action), 2);
        let o = orbit(&action, 0);
        assert_eq!(o.len(), 2);
        // the orbit is an antipodal pair
        let p = &action.points_num[o[0] as usize];
        let q = &action.points_num[o[1] as usize];
        assert!(p.iter().zip(q).all(|(a, b)| *a == -*b));
    }

    #[test]
    fn non_symmetry_is_rejected() {
        let a2 = build_named_lattice(&NamedLattice::An(2)).unwrap();
        let min = shortest_vectors(&a2);
        let bad = MatrixGroupGens {
            mats: vec![QMat::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]])],
        };
        assert!(matches!(
            action_on_min(&bad, &min, &a2),
            Err(Error::NotASymmetry(0))
        ));
    }

    #[test]
    fn hexagon_orbit_is_transitive() {
        let action = hexagon_action();
        assert_eq!(orbit(&action, 0).len(), 6);
    }

    #[test]
    fn brute_force_order_matches_bsgs_on_hexagon() {
        let action = hexagon_action();
        // brute force closure of the generated permutation group
        let mut elems: HashSet<Perm> = HashSet::from([p_identity(6)]);
        let mut frontier: Vec<Perm> = vec![p_identity(6)];
        while let Some(g) = frontier.pop() {
            for h in &action.perm_gens {
                let gh = p_compose(h, &g);
                if elems.insert(gh.clone()) {
                    frontier.push(gh);
                }
            }
        }
        assert_eq!(elems.len() as u128, group_order(&action));
    }

    #[test]
    fn stabilizer_of_antipodal_pair_in_dihedral12() {
        let action = hexagon_action();
        // S = an antipodal pair {i, -i}
        let i = 0u32;
        let j = (0..6u32)
            .find(|&j| {
                action.points_num[j as usize]
                    .iter()
                    .zip(&action.points_num[i as usize])
                    .all(|(a, b)| *a == -*b)
            })
            .unwrap();
        let s = vec![i, j];
        let chain = stabilizer_chain_for_set(&action, &s, None);
        let (gens, order) = set_stabilizer(&action, &chain, &s, 1_000_000).unwrap();
        assert_eq!(order, 4);
        for g in &gens {
            let mut img: Vec<u32> = s.iter().map(|&x| g[x as usize]).collect();
            img.sort_unstable();
            assert_eq!(img, s);
        }
        // Lagrange
        assert_eq!(group_order(&action) % order, 0);
    }

    #[test]
    fn transporter_and_setkey() {
        let action = hexagon_action();
        let s = vec![0u32, 1];
        // image of s under a generator
        let g = &action.perm_gens[1];
        let mut t: Vec<u32> = s.iter().map(|&x| g[x as usize]).collect();
        t.sort_unstable();
        assert_eq!(set_key(&action, &s), set_key(&action, &t));
        let chain = stabilizer_chain_for_set(&action, &s, None);
        let found = set_transporter(&action, &chain, &s, &t, 1_000_000)
            .unwrap()
            .expect("must find a transporter");
        let mut img: Vec<u32> = s.iter().map(|&x| found[x as usize]).collect();
        img.sort_unstable();
        assert_eq!(img, t);
        // identity case
        let id = set_transporter(&action, &chain, &s, &s, 1_000_000)
            .unwrap()
            .unwrap();
        let mut img: Vec<u32> = s.iter().map(|&x| id[x as usize]).collect();
        img.sort_unstable();
        assert_eq!(img, s);
        // different sizes are immediately inequivalent
        assert!(set_transporter(&action, &chain, &s, &[0], 10).unwrap().is_none());
    }

    #[test]
    fn transporter_certifies_nonequivalence() {
        let action = hexagon_action();
        // a pair at inner product -1 vs a pair at inner product 1 can never
        // be equivalent; set_key already separates them
        let ip = |i: u32, j: u32| action.ip_scaled(i, j);
        let mut pair_a = None;
        let mut pair_b = None;
        for i in 0..6u32 {
            for j in i + 1..6u32 {
                if ip(i, j) == ip(0, 0) / 2 && pair_a.is_none() {
                    pair_a = Some(vec![i, j]);
                }
                if ip(i, j) == -ip(0, 0) / 2 && pair_b.is_none() {
                    pair_b = Some(vec![i, j]);
                }
            }
        }
        let (a, b) = (pair_a.unwrap(), pair_b.unwrap());
        let chain = stabilizer_chain_for_set(&action, &a, None);
        assert!(set_transporter(&action, &chain, &a, &b, 1_000_000)
            .unwrap()
            .is_none());
    }

    #[test]
    fn parse_group_file_roundtrip() {
        let g = wa2();
        let txt = write_group_file(&g);
        let g2 = parse_group_file(&txt).unwrap();
        assert_eq!(g2.mats.len(), 3);
        assert_eq!(g2.mats[0], g.mats[0]);
        assert!(parse_group_file("H 2 1\n1 0\n0 1").is_err());
    }

    #[test]
    fn whole_set_stabilizer_is_whole_group() {
        let action = hexagon_action();
        let s: Vec<u32> = (0..6).collect();
        let chain = stabilizer_chain_for_set(&action, &s, None);
        let (_, order) = set_stabilizer(&action, &chain, &s, 1_000_000).unwrap();
        assert_eq!(order, 12);
    }

    #[test]
    fn deterministic_and_randomized_chains_agree() {
        let action = hexagon_action();
        let det = bsgs_deterministic(&action.perm_gens, 6, &[]);
        let rnd = bsgs_randomized(&action.perm_gens, 6, &[], None);
        assert_eq!(det.order(), rnd.order());
        let known = bsgs_randomized(&action.perm_gens, 6, &[], Some(12));
        assert_eq!(known.order(), 12);
    }

    fn named_order(name: NamedLattice) -> u128 {
        let l = build_named_lattice(&name).unwrap();
        let gens = named_automorphism_gens(&name).unwrap();
        gens.verify(&l).unwrap();
        let min = shortest_vectors(&l);
        let action = action_on_min(&gens, &min, &l).unwrap();
        group_order(&action)
    }

    #[test]
    fn automorphism_orders_of_small_named_lattices() {
        assert_eq!(named_order(NamedLattice::Zn(3)), 48);
        assert_eq!(named_order(NamedLattice::An(2)), 12);
        assert_eq!(named_order(NamedLattice::An(3)), 48);
        assert_eq!(named_order(NamedLattice::Dn(5)), 3840);
    }

    #[test]
    fn d4_triality_gives_order_1152() {
        assert_eq!(named_order(NamedLattice::Dn(4)), 1152);
    }

    #[test]
    fn e6_automorphism_order() {
        assert_eq!(named_order(NamedLattice::En(6)), 103_680);
    }

    #[test]
    fn e7_automorphism_order() {
        assert_eq!(named_order(NamedLattice::En(7)), 2_903_040);
    }

    #[test]
    fn e8_automorphism_order() {
        assert_eq!(named_order(NamedLattice::En(8)), 696_729_600);
    }

    #[test]
    #[ignore] // several minutes: enumerates all 196560 minimal vectors first
    fn leech_automorphism_order() {
        let l = build_named_lattice(&NamedLattice::LeechMOG).unwrap();
        let gens = named_automorphism_gens(&NamedLattice::LeechMOG).unwrap();
        gens.verify(&l).unwrap();
        let min = shortest_vectors(&l);
        assert_eq!(min.len(), 196_560);
        let action = action_on_min(&gens, &min, &l).unwrap();
        let chain = build_bsgs(
            &action.perm_gens,
            action.n_points(),
            &[],
            Some(8_315_553_613_086_720_000),
        );
        assert_eq!(chain.order(), 8_315_553_613_086_720_000);
    }

    #[test]
    fn forced_base_chain_has_full_order() {
        let action = hexagon_action();
        let base: Vec<u32> = (0..6).collect();
        let chain = build_forced_base(&action.perm_gens, 6, &base);
        assert_eq!(chain.order(), 12);
    }

    #[test]
    fn setkey_differs_by_size() {
        let action = hexagon_action();
        assert_ne!(set_key(&action, &[0]), set_key(&action, &[0, 1]));
    }

    #[test]
    fn minus_identity_on_leech_sample() {
        // small sanity check of the ip helpers on rational points
        let a2 = build_named_lattice(&NamedLattice::An(2)).unwrap();
        let min = shortest_vectors(&a2);
        let action = hexagon_action();
        let amb = min.ambient_all(&a2);
        let v = qvec_from_i64(&[1, -1, 0]);
        assert!(amb.contains(&v));
        assert_eq!(action.ip(0, 0), rat(2));
    }
}
