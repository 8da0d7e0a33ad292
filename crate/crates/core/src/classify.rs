//! Orbit labeling: Coxeter–Dynkin diagrams of Delone cells for shared
//! vertices, and incident-vector graphs with named-component identification
//! for additional vertices.

use std::collections::VecDeque;

use num::Zero;

use crate::exactalg::{frac, rat, QMat, QVec, Rat};
use crate::lattice::{closest_vectors, Lattice, LatticeVector, MinSet, NamedLattice};
use crate::{Error, Result};

/// m_ij value standing for ∞.
pub const M_INF: u32 = u32::MAX;

/// Symmetric matrix with entries in {1,2,3,∞} and ones on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterDynkinDiagram {
    pub m: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramComponent {
    pub nodes: Vec<usize>,
    /// aₙ/dₙ/eₙ (spherical, lowercase) or Aₙ/Dₙ/Eₙ (affine, uppercase),
    /// or "unknown"
    pub name: String,
    pub affine: bool,
}

/// Graph on the incident shortest vectors, edges at inner product 1. All
/// pairwise labels are recorded; the simple-graph view is only meaningful
/// when every off-diagonal label is 1 or 2.
#[derive(Clone, Debug)]
pub struct FacetGraph {
    pub n: usize,
    pub labels: Vec<Vec<Rat>>,
    pub adj: Vec<Vec<bool>>,
    pub applicable: bool,
}

// ---------------------------------------------------------------------------
// Delone diagrams

/// Delone cell around v (all closest lattice points) and its Coxeter–Dynkin
/// diagram from the squared-distance rule 4→2, 6→3, 8→∞. Leech-specific.
pub fn delone_diagram(
    l: &Lattice,
    v: &[Rat],
) -> Result<(Vec<LatticeVector>, CoxeterDynkinDiagram)> {
    if l.name != Some(NamedLattice::LeechMOG) {
        return Err(Error::RuleDomain(
            "the distance-to-m rule is specific to the Leech lattice convention".into(),
        ));
    }
    let (_, vertices) = closest_vectors(l, v)?;
    let amb: Vec<QVec> = vertices.iter().map(|w| l.ambient(&w.coords)).collect();
    let n = vertices.len();
    let mut m = vec![vec![2u32; n]; n];
    for i in 0..n {
        m[i][i] = 1;
        for j in i + 1..n {
            let d: Rat = amb[i]
                .iter()
                .zip(&amb[j])
                .map(|(a, b)| {
                    let t = a - b;
                    &t * &t
                })
                .sum::<Rat>()
                / rat(l.ip_denom);
            let mij = if d == rat(4) {
                2
            } else if d == rat(6) {
                3
            } else if d == rat(8) {
                M_INF
            } else {
                return Err(Error::RuleDomain(format!(
                    "pairwise squared distance {} outside {{4,6,8}}",
                    crate::exactalg::rat_str(&d)
                )));
            };
            m[i][j] = mij;
            m[j][i] = mij;
        }
    }
    Ok((vertices, CoxeterDynkinDiagram { m }))
}

fn components_of(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for (y, &e) in adj[x].iter().enumerate() {
                if e && !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Arm profile of a tree seen from a branch node: lengths (in nodes) of the
/// pendant chains hanging off it. None if an arm is not a plain chain.
fn arms_from(adj: &[Vec<bool>], center: usize) -> Option<Vec<usize>> {
    let mut arms = Vec::new();
    for (next, &e) in adj[center].iter().enumerate() {
        if !e {
            continue;
        }
        let mut prev = center;
        let mut cur = next;
        let mut len = 1;
        loop {
            let nbrs: Vec<usize> = adj[cur]
                .iter()
                .enumerate()
                .filter(|(y, &e)| e && *y != prev)
                .map(|(y, _)| y)
                .collect();
            match nbrs.len() {
                0 => break,
                1 => {
                    prev = cur;
                    cur = nbrs[0];
                    len += 1;
                }
                _ => return None, // arm hits another branch node
            }
        }
        arms.push(len);
    }
    arms.sort_unstable();
    Some(arms)
}

/// Names a connected tree (all edges m=3) in the a/d/e/T vocabulary; the
/// caller decides spherical vs affine from the Cartan matrix.
fn name_tree(adj: &[Vec<bool>]) -> String {
    let n = adj.len();
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&e| e).count()).collect();
    let branch: Vec<usize> = (0..n).filter(|&i| deg[i] >= 3).collect();
    match branch.len() {
        0 => format!("a{n}"), // path
        1 => {
            let c = branch[0];
            if deg[c] == 4 {
                // only the affine D4 star has a degree-4 node
                let arms = arms_from(adj, c);
                return if arms.as_deref() == Some(&[1, 1, 1, 1]) {
                    "D4".into()
                } else {
                    "unknown".into()
                };
            }
            match arms_from(adj, c).as_deref() {
                Some(&[1, 1, k]) => format!("d{}", k + 3),
                Some(&[1, 2, 2]) => "e6".into(),
                Some(&[2, 2, 2]) => "E6".into(),
                Some(&[1, 2, 3]) => "e7".into(),
                Some(&[1, 3, 3]) => "E7".into(),
                Some(&[1, 2, 4]) => "e8".into(),
                Some(&[1, 2, 5]) => "E8".into(),
                Some(&[a, b, c2]) => format!("T[{},{},{}]", c2 - 1, b - 1, a - 1),
                _ => "unknown".into(),
            }
        }
        2 => {
            // two branch nodes: pendant pairs at each end, a chain between
            let (p, q) = (branch[0], branch[1]);
            if deg[p] != 3 || deg[q] != 3 {
                return "unknown".into();
            }
            let ends = match (two_center_profile(adj, p, q), two_center_profile(adj, q, p)) {
                (Some(a), Some(b)) => (a, b),
                _ => return "unknown".into(),
            };
            let ((a1, a2), chain) = ends.0;
            let ((b1, b2), chain2) = ends.1;
            if chain != chain2 {
                return "unknown".into();
            }
            // affine Dn: both ends are (1,1) pendant pairs
            if a1 == 1 && a2 == 1 && b1 == 1 && b2 == 1 {
                return format!("D{}", n - 1);
            }
            let mut left = [a2 - 1, a1 - 1];
            let mut right = [b2 - 1, b1 - 1];
            left.sort_unstable_by(|x, y| y.cmp(x));
            right.sort_unstable_by(|x, y| y.cmp(x));
            if right > left {
                std::mem::swap(&mut left, &mut right);
            }
            format!(
                "T[{},{};{};{},{}]",
                left[0], left[1], chain, right[0], right[1]
            )
        }
        3 => match three_center_profile(adj, &branch) {
            Some(s) => s,
            None => "unknown".into(),
        },
        _ => "unknown".into(),
    }
}

/// For a two-branch-node tree: pendant arm lengths at `c` (sorted) and the
/// chain length (in nodes, excluding both centers) towards `other`.
fn two_center_profile(
    adj: &[Vec<bool>],
    c: usize,
    other: usize,
) -> Option<((usize, usize), usize)> {
    let mut pendants = Vec::new();
    let mut chain = None;
    for (next, &e) in adj[c].iter().enumerate() {
        if !e {
            continue;
        }
        let mut prev = c;
        let mut cur = next;
        let mut len = 0usize;
        loop {
            if cur == other {
                chain = Some(len);
                break;
            }
            len += 1;
            let nbrs: Vec<usize> = adj[cur]
                .iter()
                .enumerate()
                .filter(|(y, &e)| e && *y != prev)
                .map(|(y, _)| y)
                .collect();
            match nbrs.len() {
                0 => {
                    pendants.push(len);
                    break;
                }
                1 => {
                    prev = cur;
                    cur = nbrs[0];
                }
                _ => return None,
            }
        }
    }
    if pendants.len() != 2 {
        return None;
    }
    pendants.sort_unstable();
    Some(((pendants[0], pendants[1]), chain?))
}

/// Names the three-branch-node trees T[a,b;c;d;e;f,g]: centers in a path,
/// outer centers carry two pendant arms, the middle one carries one.
fn three_center_profile(adj: &[Vec<bool>], branch: &[usize]) -> Option<String> {
    if branch.iter().any(|&b| adj[b].iter().filter(|&&e| e).count() != 3) {
        return None;
    }
    // the middle center is adjacent (through chains) to both others
    for &mid in branch {
        let outer: Vec<usize> = branch.iter().copied().filter(|&b| b != mid).collect();
        let prof_mid = center_chains(adj, mid, branch)?;
        // mid must reach both outer centers and have exactly one pendant
        let mut chains = Vec::new();
        let mut pendant = None;
        for (target, len) in &prof_mid {
            match target {
                Some(t) if outer.contains(t) => chains.push((*t, *len)),
                None => pendant = Some(*len),
                _ => return None,
            }
        }
        if chains.len() != 2 || pendant.is_none() {
            continue;
        }
        let d = pendant.unwrap();
        let mut sides = Vec::new();
        for (t, clen) in &chains {
            let prof = center_chains(adj, *t, branch)?;
            let mut pend: Vec<usize> = prof
                .iter()
                .filter(|(tg, _)| tg.is_none())
                .map(|(_, l)| *l)
                .collect();
            if pend.len() != 2 {
                return None;
            }
            pend.sort_unstable_by(|x, y| y.cmp(x));
            sides.push(((pend[0] - 1, pend[1] - 1), clen - 1));
        }
        let (mut s0, mut s1) = (sides[0], sides[1]);
        if (s1.0, s1.1) > (s0.0, s0.1) {
            std::mem::swap(&mut s0, &mut s1);
        }
        return Some(format!(
            "T[{},{};{};{};{};{},{}]",
            s0.0 .0,
            s0.0 .1,
            s0.1,
            d - 1,
            s1.1,
            s1.0 .0,
            s1.0 .1
        ));
    }
    None
}

/// Chains leaving a branch node: (other branch node reached or None for a
/// pendant end, chain length in intermediate nodes for center targets /
/// total nodes for pendants).
fn center_chains(
    adj: &[Vec<bool>],
    c: usize,
    branch: &[usize],
) -> Option<Vec<(Option<usize>, usize)>> {
    let mut out = Vec::new();
    for (next, &e) in adj[c].iter().enumerate() {
        if !e {
            continue;
        }
        let mut prev = c;
        let mut cur = next;
        let mut len = 0usize;
        loop {
            if branch.contains(&cur) {
                out.push((Some(cur), len + 1));
                break;
            }
            len += 1;
            let nbrs: Vec<usize> = adj[cur]
                .iter()
                .enumerate()
                .filter(|(y, &e)| e && *y != prev)
                .map(|(y, _)| y)
                .collect();
            match nbrs.len() {
                0 => {
                    out.push((None, len));
                    break;
                }
                1 => {
                    prev = cur;
                    cur = nbrs[0];
                }
                _ => return None,
            }
        }
    }
    Some(out)
}

/// Cartan matrix (−cos π/m): 1 on the diagonal, 0 / −1/2 / −1 for m = 2/3/∞.
fn cartan_matrix(d: &CoxeterDynkinDiagram, nodes: &[usize]) -> QMat {
    let k = nodes.len();
    let mut rows = vec![vec![Rat::zero(); k]; k];
    for (i, &ni) in nodes.iter().enumerate() {
        for (j, &nj) in nodes.iter().enumerate() {
            rows[i][j] = match d.m[ni][nj] {
                1 => rat(1),
                2 => Rat::zero(),
                3 => frac(-1, 2),
                M_INF => rat(-1),
                other => panic!("m value {other} outside {{1,2,3,∞}}"),
            };
        }
    }
    QMat { rows }
}

/// Decomposes a diagram into indecomposable components (separated by m=2)
/// and names each; the affine flag comes from Cartan definiteness and must
/// agree with the structural name.
pub fn classify_diagram(d: &CoxeterDynkinDiagram) -> Result<Vec<DiagramComponent>> {
    let n = d.m.len();
    for i in 0..n {
        if d.m[i][i] != 1 {
            return Err(Error::Shape("diagram diagonal must be 1".into()));
        }
        for j in 0..n {
            if d.m[i][j] != d.m[j][i] {
                return Err(Error::Shape("diagram must be symmetric".into()));
            }
            if i != j && !matches!(d.m[i][j], 2 | 3 | M_INF) {
                return Err(Error::Shape("off-diagonal m must be 2, 3 or ∞".into()));
            }
        }
    }
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            adj[i][j] = i != j && d.m[i][j] != 2;
        }
    }
    let mut out = Vec::new();
    for nodes in components_of(&adj) {
        let k = nodes.len();
        let cartan = cartan_matrix(d, &nodes);
        let affine = match crate::exactalg::definiteness(&cartan)? {
            crate::exactalg::Definiteness::PositiveDefinite => false,
            crate::exactalg::Definiteness::PositiveSemidefinite => true,
            crate::exactalg::Definiteness::Indefinite => {
                return Err(Error::RuleDomain(
                    "diagram component is neither spherical nor affine".into(),
                ))
            }
        };
        // local adjacency and edge labels
        let mut ladj = vec![vec![false; k]; k];
        let mut has_inf = false;
        let mut edges = 0usize;
        for a in 0..k {
            for b in a + 1..k {
                if d.m[nodes[a]][nodes[b]] != 2 {
                    ladj[a][b] = true;
                    ladj[b][a] = true;
                    edges += 1;
                    if d.m[nodes[a]][nodes[b]] == M_INF {
                        has_inf = true;
                    }
                }
            }
        }
        let name = if has_inf {
            if k == 2 {
                "A1".to_string()
            } else {
                "unknown".to_string()
            }
        } else if edges == k {
            // exactly one cycle: the affine A series if it is the whole component
            let all_deg2 = ladj.iter().all(|r| r.iter().filter(|&&e| e).count() == 2);
            if all_deg2 {
                format!("A{}", k - 1)
            } else {
                "unknown".to_string()
            }
        } else if edges == k - 1 {
            name_tree(&ladj)
        } else {
            "unknown".to_string()
        };
        if name != "unknown" {
            let name_affine = name.starts_with(['A', 'D', 'E']);
            if name_affine != affine {
                return Err(Error::Internal(format!(
                    "diagram component named {name} disagrees with Cartan definiteness"
                )));
            }
            // only the a/d/e families belong in diagram components
            if name.starts_with('T') {
                return Err(Error::Internal(
                    "tree outside the a/d/e families in a Coxeter-Dynkin diagram".into(),
                ));
            }
        }
        out.push(DiagramComponent {
            nodes,
            name,
            affine,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// facet graphs

/// Graph on the incident shortest vectors of a vertex, edges at inner
/// product 1 (ambient inner product of the lattice).
pub fn facet_graph(l: &Lattice, tight_vectors: &[LatticeVector]) -> FacetGraph {
    let n = tight_vectors.len();
    let amb: Vec<QVec> = tight_vectors.iter().map(|w| l.ambient(&w.coords)).collect();
    let mut labels = vec![vec![Rat::zero(); n]; n];
    let mut adj = vec![vec![false; n]; n];
    let mut applicable = true;
    for i in 0..n {
        for j in 0..n {
            let ip = l.inner(&amb[i], &amb[j]);
            if i != j {
                if ip == rat(1) {
                    adj[i][j] = true;
                } else if ip != rat(2) {
                    applicable = false;
                }
            }
            labels[i][j] = ip;
        }
    }
    FacetGraph {
        n,
        labels,
        adj,
        applicable,
    }
}

fn degrees(adj: &[Vec<bool>]) -> Vec<usize> {
    adj.iter().map(|r| r.iter().filter(|&&e| e).count()).collect()
}

fn edge_count(adj: &[Vec<bool>]) -> usize {
    degrees(adj).iter().sum::<usize>() / 2
}

/// Girth via BFS from every vertex; usize::MAX for forests.
fn girth(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    let mut best = usize::MAX;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for (y, &e) in adj[x].iter().enumerate() {
                if !e {
                    continue;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if y != parent[x] {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    best
}

/// Strongly-regular parameter check: every vertex degree k, adjacent pairs
/// have λ common neighbours, non-adjacent pairs μ.
fn is_srg(adj: &[Vec<bool>], k: usize, lambda: usize, mu: usize) -> bool {
    let n = adj.len();
    let deg = degrees(adj);
    if deg.iter().any(|&d| d != k) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            let common = (0..n).filter(|&x| adj[i][x] && adj[j][x]).count();
            let want = if adj[i][j] { lambda } else { mu };
            if common != want {
                return false;
            }
        }
    }
    true
}

/// Distance-regular graph check against an intersection array
/// {b₀,…,b_{d−1}; c₁,…,c_d}.
fn is_drg(adj: &[Vec<bool>], b: &[usize], c: &[usize]) -> bool {
    let n = adj.len();
    let diam = b.len();
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for (y, &e) in adj[x].iter().enumerate() {
                if e && dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist.iter().any(|&d| d == usize::MAX || d > diam) {
            return false;
        }
        for v in 0..n {
            let i = dist[v];
            let further = (0..n).filter(|&x| adj[v][x] && dist[x] == i + 1).count();
            let closer = if i == 0 {
                0
            } else {
                (0..n).filter(|&x| adj[v][x] && dist[x] == i - 1).count()
            };
            if i < diam && further != b[i] {
                return false;
            }
            if i == diam && further != 0 {
                return false;
            }
            if i >= 1 && closer != c[i - 1] {
                return false;
            }
        }
    }
    true
}

/// Names one connected component of a facet graph.
pub fn identify_graph_component(adj: &[Vec<bool>]) -> String {
    let n = adj.len();
    let m = edge_count(adj);
    if m == n - 1 {
        // tree
        return name_tree(adj);
    }
    match n {
        100 if is_srg(adj, 22, 0, 6) => return "HS100".into(),
        50 if is_srg(adj, 7, 0, 1) => return "HS50".into(),
        35 if is_drg(adj, &[12, 6, 2], &[1, 4, 9]) => return "J(7,4)".into(),
        28 if is_drg(adj, &[3, 2, 2, 1], &[1, 1, 1, 2]) => return "Cox".into(),
        30 if degrees(adj).iter().all(|&d| d == 3) && girth(adj) == 8 => return "(3,8)".into(),
        42 if degrees(adj).iter().all(|&d| d == 5) && girth(adj) == 6 => return "(5,6)".into(),
        _ => {}
    }
    // the Figure-1 G graphs: connected, cyclic, degrees within {1,2,3},
    // distinguished by their (vertices, edges) signature
    if degrees(adj).iter().all(|&d| (1..=3).contains(&d)) {
        return format!("G{n},{m}");
    }
    format!("unknown({n},{m})")
}

// ---------------------------------------------------------------------------
// row labels

/// Formats a multiset of component names in table style: special graph names
/// first (each its own token), then the a/d/e parts ascending; Table 1 style
/// separates every part by spaces, Table 2 style concatenates the a/d/e tail.
pub fn format_component_names(mut names: Vec<String>, concat_ade: bool) -> String {
    fn family_rank(s: &str) -> (u8, u32) {
        let fam = match s.chars().next().unwrap_or('?') {
            'a' => 0,
            'd' => 1,
            'e' => 2,
            'A' => 0,
            'D' => 1,
            'E' => 2,
            _ => 9,
        };
        let idx: u32 = s[1..].parse().unwrap_or(0);
        (fam, idx)
    }
    let is_ade = |s: &str| {
        s.len() >= 2
            && matches!(s.chars().next().unwrap(), 'a' | 'd' | 'e' | 'A' | 'D' | 'E')
            && s[1..].chars().all(|c| c.is_ascii_digit())
    };
    names.sort_by(|x, y| {
        let (xs, ys) = (is_ade(x), is_ade(y));
        match (xs, ys) {
            (true, true) => family_rank(x).cmp(&family_rank(y)),
            (false, false) => (y.len(), y.as_str()).cmp(&(x.len(), x.as_str())).reverse(),
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
        }
    });
    // run-length encode into name^k tokens
    let mut tokens: Vec<(String, usize, bool)> = Vec::new();
    for name in names {
        match tokens.last_mut() {
            Some((t, k, _)) if *t == name => *k += 1,
            _ => {
                let ade = is_ade(&name);
                tokens.push((name, 1, ade));
            }
        }
    }
    let mut out = String::new();
    for (i, (name, k, ade)) in tokens.iter().enumerate() {
        if i > 0 {
            let prev_ade = tokens[i - 1].2;
            if !(concat_ade && *ade && prev_ade) {
                out.push(' ');
            }
        }
        out.push_str(name);
        if *k > 1 {
            out.push_str(&format!("^{k}"));
        }
    }
    out
}

/// A classified orbit row in table style.
#[derive(Clone, Debug)]
pub struct ClassifiedRow {
    pub name: String,
    pub norm_sq: Rat,
    pub n_count: usize,
    pub stabilizer_order: u128,
    /// representative vertex in ambient coordinates
    pub vertex: QVec,
    pub shared: bool,
    /// Delone-vertex count for shared rows (the table's other N reading)
    pub delone_count: Option<usize>,
}

/// Labels one orbit record of a Leech contact-polar run: Delone-diagram name
/// for shared vertices, facet-graph name for additional ones, "exceptional"
/// for the 552-incidence vertex.
pub fn classify_orbit(
    record: &crate::engine::OrbitRecord,
    l: &Lattice,
    min: &MinSet,
) -> Result<ClassifiedRow> {
    let mut ambient = vec![Rat::zero(); l.ambient_dim()];
    for (yi, brow) in record.rep_vertex.iter().zip(&l.basis.rows) {
        for (xj, bj) in ambient.iter_mut().zip(brow) {
            *xj += yi * bj;
        }
    }
    let (dist_sq, _) = closest_vectors(l, &ambient)?;
    if dist_sq > record.norm_sq {
        return Err(Error::Internal(
            "closest-point distance cannot exceed the vertex norm".into(),
        ));
    }
    let shared = dist_sq == record.norm_sq;
    let (name, delone_count) = if shared {
        let (vertices, diagram) = delone_diagram(l, &ambient)?;
        let comps = classify_diagram(&diagram)?;
        let all_affine = comps.iter().all(|c| c.affine);
        let none_affine = comps.iter().all(|c| !c.affine);
        let norm_two = record.norm_sq == rat(2);
        if all_affine != norm_two || !(all_affine || none_affine) {
            return Err(Error::Internal(
                "diagram components must be all affine iff the vertex norm² is 2".into(),
            ));
        }
        let names = comps.into_iter().map(|c| c.name).collect();
        (format_component_names(names, false), Some(vertices.len()))
    } else {
        let tight_vectors: Vec<LatticeVector> = record
            .tight
            .indices
            .iter()
            .map(|&i| min.vectors[i as usize].clone())
            .collect();
        let g = facet_graph(l, &tight_vectors);
        if !g.applicable {
            if record.incidence_count == 552 {
                ("exceptional".to_string(), None)
            } else {
                (format!("unlabeled({})", record.incidence_count), None)
            }
        } else {
            let names = components_of(&g.adj)
                .into_iter()
                .map(|nodes| {
                    let k = nodes.len();
                    let mut sub = vec![vec![false; k]; k];
                    for a in 0..k {
                        for b in 0..k {
                            sub[a][b] = g.adj[nodes[a]][nodes[b]];
                        }
                    }
                    identify_graph_component(&sub)
                })
                .collect();
            (format_component_names(names, true), None)
        }
    };
    Ok(ClassifiedRow {
        name,
        norm_sq: record.norm_sq.clone(),
        n_count: record.incidence_count,
        stabilizer_order: record.stabilizer_order,
        vertex: ambient,
        shared,
        delone_count,
    })
}
