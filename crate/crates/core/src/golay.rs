//! Binary Golay code, the 196560 minimal vectors of the Leech lattice in MOG
//! coordinates, and the parser for the bundled table fixtures.
//!
//! Coordinate frame: entry index p in the 24-vector corresponds to the MOG
//! cell at row p % 4 and column p / 4 of the 4×6 array. Rows carry the GF(4)
//! labels 0, 1, ω, ω² and columns the hexacode positions a, b, c, f(1),
//! f(ω), f(ω²). All bundled data (tables, group generators) uses this frame.

use std::collections::HashSet;

use num::{Signed, Zero};

use crate::exactalg::{frac, rat, Rat};
use crate::{Error, Result};

/// GF(4) multiplication on {0, 1, ω=2, ω²=3}; addition is xor.
const GF4_MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

fn gmul(x: u8, y: u8) -> u8 {
    GF4_MUL[x as usize][y as usize]
}

/// The 64 hexacode words (a, b, c, f(1), f(ω), f(ω²)) for f(x) = ax² + bx + c.
fn hexacode() -> Vec<[u8; 6]> {
    let mut words = Vec::with_capacity(64);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                let f = |x: u8| gmul(a, gmul(x, x)) ^ gmul(b, x) ^ c;
                words.push([a, b, c, f(1), f(2), f(3)]);
            }
        }
    }
    words
}

pub struct GolayCode {
    /// All 4096 codewords as 24-bit masks over the coordinate frame above.
    pub codewords: Vec<u32>,
    /// The 759 weight-8 codewords.
    pub octads: Vec<u32>,
    set: HashSet<u32>,
}

impl GolayCode {
    pub fn contains(&self, mask: u32) -> bool {
        self.set.contains(&mask)
    }
}

/// Builds the [24,12,8] Golay code from the hexacode: a 0/1 array over the
/// 4×6 MOG cells is a codeword iff every column's parity equals the top-row
/// parity and the column scores form a hexacode word.
pub fn build_golay() -> GolayCode {
    // per (score, parity): the 4-bit row masks realizing it in one column
    let mut reals: Vec<Vec<Vec<u8>>> = vec![vec![Vec::new(); 2]; 4];
    for rows in 0..16u8 {
        let mut score = 0u8;
        let mut count = 0usize;
        for r in 0..4u8 {
            if rows >> r & 1 == 1 {
                score ^= r;
                count += 1;
            }
        }
        reals[score as usize][count % 2].push(rows);
    }
    let mut codewords = Vec::with_capacity(4096);
    for w in hexacode() {
        for parity in 0..2usize {
            let opts: Vec<&Vec<u8>> = w.iter().map(|&s| &reals[s as usize][parity]).collect();
            let mut combo = [0usize; 6];
            loop {
                let cols: Vec<u8> = (0..6).map(|c| opts[c][combo[c]]).collect();
                let top: usize = cols.iter().map(|&cm| (cm & 1) as usize).sum();
                if top % 2 == parity {
                    let mut mask = 0u32;
                    for (c, &cm) in cols.iter().enumerate() {
                        for r in 0..4 {
                            if cm >> r & 1 == 1 {
                                mask |= 1 << (4 * c + r);
                            }
                        }
                    }
                    codewords.push(mask);
                }
                // advance the mixed-radix counter
                let mut c = 0;
                loop {
                    if c == 6 {
                        break;
                    }
                    combo[c] += 1;
                    if combo[c] < opts[c].len() {
                        break;
                    }
                    combo[c] = 0;
                    c += 1;
                }
                if c == 6 {
                    break;
                }
            }
        }
    }
    codewords.sort_unstable();
    codewords.dedup();
    let octads = codewords
        .iter()
        .copied()
        .filter(|m| m.count_ones() == 8)
        .collect();
    let set = codewords.iter().copied().collect();
    GolayCode {
        codewords,
        octads,
        set,
    }
}

/// Membership test for the Leech lattice in the MOG frame (integer ambient
/// coordinates, inner product (Σxᵢyᵢ)/8).
pub fn in_leech(code: &GolayCode, x: &[i64]) -> bool {
    let m = x[0].rem_euclid(2);
    if x.iter().any(|&xi| xi.rem_euclid(2) != m) {
        return false;
    }
    let mut mask = 0u32;
    for (i, &xi) in x.iter().enumerate() {
        if (xi - m).rem_euclid(4) != 0 {
            mask |= 1 << i;
        }
    }
    if !code.contains(mask) {
        return false;
    }
    let sum: i64 = x.iter().sum();
    sum.rem_euclid(8) == (4 * m).rem_euclid(8)
}

/// The 196560 minimal vectors (norm² = 4) as integer ambient vectors, in the
/// order of construction: 4²-type, 2⁸-octad-type, 3·1²³-type.
pub fn leech_min_ambient(code: &GolayCode) -> Vec<[i64; 24]> {
    let mut vs = Vec::with_capacity(196560);
    for i in 0..24 {
        for j in i + 1..24 {
            for si in [4i64, -4] {
                for sj in [4i64, -4] {
                    let mut v = [0i64; 24];
                    v[i] = si;
                    v[j] = sj;
                    vs.push(v);
                }
            }
        }
    }
    for &m in &code.octads {
        let idx: Vec<usize> = (0..24).filter(|&i| m >> i & 1 == 1).collect();
        for signs in 0..256u32 {
            if signs.count_ones() % 2 != 0 {
                continue;
            }
            let mut v = [0i64; 24];
            for (k, &i) in idx.iter().enumerate() {
                v[i] = if signs >> k & 1 == 1 { -2 } else { 2 };
            }
            vs.push(v);
        }
    }
    for &m in &code.codewords {
        let mut base = [0i64; 24];
        for (i, b) in base.iter_mut().enumerate() {
            *b = if m >> i & 1 == 1 { -1 } else { 1 };
        }
        for j in 0..24 {
            let mut v = base;
            v[j] = if m >> j & 1 == 1 { 3 } else { -3 };
            vs.push(v);
        }
    }
    vs
}

/// Counts of the three construction shapes (4²-type, 2⁸-type, 3·1²³-type).
pub fn shape_counts(vectors: &[[i64; 24]]) -> (usize, usize, usize) {
    let mut counts = (0, 0, 0);
    for v in vectors {
        match v.iter().map(|x| x.abs()).max().unwrap() {
            4 => counts.0 += 1,
            2 => counts.1 += 1,
            3 => counts.2 += 1,
            _ => unreachable!("minimal vectors have max entry 2, 3, or 4"),
        }
    }
    counts
}

/// Row-style Hermite normal form (upper triangular, positive pivots) of a
/// spanning set of integer rows; panics if the rows do not have full column
/// rank. Intermediate entries can grow past i64, so this works in BigInt and
/// converts back at the end (the final HNF entries are small).
fn hnf24(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    use num::bigint::BigInt;
    use num::Integer;
    let n = 24;
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    for col in 0..n {
        let k = (col..m.len())
            .find(|&i| !m[i][col].is_zero())
            .expect("rows must span");
        m.swap(col, k);
        for i in col + 1..m.len() {
            while !m[i][col].is_zero() {
                let q = m[col][col].div_floor(&m[i][col]);
                for j in 0..n {
                    let t = &q * &m[i][j];
                    m[col][j] -= t;
                }
                m.swap(col, i);
            }
        }
        if m[col][col].is_negative() {
            for j in 0..n {
                m[col][j] = -m[col][j].clone();
            }
        }
        for i in 0..col {
            let q = m[i][col].div_floor(&m[col][col]);
            if !q.is_zero() {
                for j in 0..n {
                    let t = &q * &m[col][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    m.truncate(n);
    m.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| num::ToPrimitive::to_i64(&x).expect("HNF entry fits i64"))
                .collect()
        })
        .collect()
}

/// A 24×24 integer basis of the Leech lattice in the MOG frame, as the HNF of
/// the standard generating set (doubled codewords, the 4²-type generators,
/// and one 3·1²³-type vector). Determinant 2³⁶.
pub fn leech_basis(code: &GolayCode) -> Vec<Vec<i64>> {
    let mut gens: Vec<Vec<i64>> = Vec::new();
    // greedily pick 12 linearly independent codewords
    let mut span: HashSet<u32> = HashSet::from([0]);
    for &w in &code.codewords {
        if span.contains(&w) {
            continue;
        }
        gens.push((0..24).map(|i| 2 * ((w >> i & 1) as i64)).collect());
        let add: Vec<u32> = span.iter().map(|&x| x ^ w).collect();
        span.extend(add);
        if span.len() == 4096 {
            break;
        }
    }
    assert_eq!(gens.len(), 12);
    for j in 1..24 {
        let mut v = vec![0i64; 24];
        v[0] = 4;
        v[j] = 4;
        gens.push(v);
    }
    let mut v = vec![0i64; 24];
    v[0] = 4;
    v[1] = -4;
    gens.push(v);
    let mut y = vec![1i64; 24];
    y[0] = -3;
    gens.push(y);
    hnf24(&gens)
}

/// A representative vector from the bundled tables: integer MOG entries to be
/// scaled by α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MOGVector {
    pub entries: Vec<i64>,
    pub alpha: Rat,
}

impl MOGVector {
    /// Ambient coordinates α·entries.
    pub fn ambient(&self) -> Vec<Rat> {
        self.entries.iter().map(|&e| &self.alpha * rat(e)).collect()
    }

    /// ⟨v,v⟩ = α²·Σeᵢ²/8.
    pub fn norm_sq(&self) -> Rat {
        let s: i64 = self.entries.iter().map(|e| e * e).sum();
        &self.alpha * &self.alpha * frac(s, 8)
    }
}

/// One parsed fixture row.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub name: String,
    pub norm_sq: Rat,
    pub n: u64,
    pub stabilizer_order: u128,
    pub vector: MOGVector,
}

/// Parses `name | p/q | N | g | p/q | 24 integers` and validates that the
/// reconstructed vector's exact norm² equals the printed norm field.
pub fn parse_table_row(line: &str) -> Result<TableRow> {
    let parts: Vec<&str> = line.split('|').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(Error::Parse(format!(
            "expected 6 |-separated fields, got {}",
            parts.len()
        )));
    }
    let norm_sq = crate::exactalg::parse_rat(parts[1])?;
    if !norm_sq.is_positive() {
        return Err(Error::Parse("norm field must be positive".into()));
    }
    let n: u64 = parts[2]
        .parse()
        .map_err(|_| Error::Parse(format!("bad incidence count {:?}", parts[2])))?;
    let stabilizer_order: u128 = parts[3]
        .parse()
        .map_err(|_| Error::Parse(format!("bad stabilizer order {:?}", parts[3])))?;
    let alpha = crate::exactalg::parse_rat(parts[4])?;
    let entries: Vec<i64> = parts[5]
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad entry {t:?}")))
        })
        .collect::<Result<_>>()?;
    if entries.len() != 24 {
        return Err(Error::Parse(format!(
            "expected 24 entries, got {}",
            entries.len()
        )));
    }
    let vector = MOGVector { entries, alpha };
    if vector.norm_sq() != norm_sq {
        return Err(Error::TableConsistency(format!(
            "row {:?}: printed norm² {} but the vector has norm² {}",
            parts[0],
            parts[1],
            crate::exactalg::rat_str(&vector.norm_sq())
        )));
    }
    Ok(TableRow {
        name: parts[0].to_string(),
        norm_sq,
        n,
        stabilizer_order,
        vector,
    })
}

/// Bundled machine-readable copy of the shared-vertex table (164 rows).
pub fn bundled_table1() -> &'static str {
    include_str!("../data/table1.tab")
}

/// Bundled machine-readable copy of the additional-vertex table (68 rows).
pub fn bundled_table2() -> &'static str {
    include_str!("../data/table2.tab")
}

/// Bundled generator matrices for the full orthogonal group of the Leech
/// lattice (order 8315553613086720000), in the group file format.
pub fn bundled_co0_group() -> &'static str {
    include_str!("../data/co0.group")
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(parse_table_row)
        .collect()
}
