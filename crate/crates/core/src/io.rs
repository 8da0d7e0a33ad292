//! Line-oriented text formats shared by the library and the CLI: lattice
//! files, min-vector files, orbit reports, and run checkpoints. Everything is
//! exact rationals; see docs/formats.md for the grammar.

use crate::classify::ClassifiedRow;
use crate::engine::OrbitRecord;
use crate::exactalg::{parse_rat, rat_str, QMat, QVec, Rat};
use crate::lattice::{Lattice, LatticeVector, MinSet};
use crate::{Error, Result};

fn parse_usize(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("missing or bad {what}")))
}

// ---------------------------------------------------------------------------
// lattice files: "L <ambient_dim> <rank> <ip_denom>" + rank basis rows

pub fn parse_lattice_file(text: &str) -> Result<Lattice> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty lattice file".into()))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("L") {
        return Err(Error::Parse("lattice file must start with 'L m n s'".into()));
    }
    let m = parse_usize(toks.next(), "ambient dimension")?;
    let n = parse_usize(toks.next(), "rank")?;
    let s: i64 = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("missing or bad inner-product denominator".into()))?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} basis rows")))?;
        let row: Result<QVec> = line.split_whitespace().map(parse_rat).collect();
        let row = row?;
        if row.len() != m {
            return Err(Error::Parse(format!(
                "basis row has {} entries, expected {m}",
                row.len()
            )));
        }
        rows.push(row);
    }
    Lattice::new(QMat { rows }, s)
}

pub fn write_lattice_file(l: &Lattice) -> String {
    let mut out = format!("L {} {} {}\n", l.ambient_dim(), l.dim(), l.ip_denom);
    for row in &l.basis.rows {
        let line: Vec<String> = row.iter().map(rat_str).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// min-vector files: "MIN <count> <min_norm_sq>" + integer coordinate rows

pub fn write_min_file(min: &MinSet) -> String {
    let mut out = format!("MIN {} {}\n", min.len(), rat_str(&min.min_norm_sq));
    for v in &min.vectors {
        let line: Vec<String> = v.coords.iter().map(|c| c.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_min_file(text: &str) -> Result<MinSet> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty min file".into()))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("MIN") {
        return Err(Error::Parse("min file must start with 'MIN count norm'".into()));
    }
    let count = parse_usize(toks.next(), "vector count")?;
    let norm = parse_rat(
        toks.next()
            .ok_or_else(|| Error::Parse("missing minimal norm".into()))?,
    )?;
    let mut vectors = Vec::with_capacity(count);
    for _ in 0..count {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {count} vector rows")))?;
        let coords: std::result::Result<Vec<i64>, _> =
            line.split_whitespace().map(str::parse).collect();
        let coords = coords.map_err(|e| Error::Parse(format!("bad coordinate: {e}")))?;
        vectors.push(LatticeVector::new(coords));
    }
    Ok(MinSet {
        vectors,
        min_norm_sq: norm,
    })
}

// ---------------------------------------------------------------------------
// orbit reports: one record per line,
// "norm | N | stabilizer | v1 .. vn | t1 .. tN"

/// A parsed orbit-report record (the canonicalization key and certification
/// data are not serialized).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRecord {
    pub norm_sq: Rat,
    pub incidence_count: usize,
    pub stabilizer_order: u128,
    pub vertex: QVec,
    pub tight: Vec<u32>,
}

pub fn write_orbit_report(records: &[OrbitRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let v: Vec<String> = r.rep_vertex.iter().map(rat_str).collect();
        let t: Vec<String> = r.tight.indices.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "{} | {} | {} | {} | {}\n",
            rat_str(&r.norm_sq),
            r.incidence_count,
            r.stabilizer_order,
            v.join(" "),
            t.join(" ")
        ));
    }
    out
}

pub fn parse_orbit_report(text: &str) -> Result<Vec<ReportRecord>> {
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "orbit record needs 5 |-separated fields, got {}",
                parts.len()
            )));
        }
        let norm_sq = parse_rat(parts[0])?;
        let incidence_count = parts[1]
            .parse()
            .map_err(|e| Error::Parse(format!("bad incidence count: {e}")))?;
        let stabilizer_order = parts[2]
            .parse()
            .map_err(|e| Error::Parse(format!("bad stabilizer order: {e}")))?;
        let vertex: Result<QVec> = parts[3].split_whitespace().map(parse_rat).collect();
        let tight: std::result::Result<Vec<u32>, _> =
            parts[4].split_whitespace().map(str::parse).collect();
        let tight = tight.map_err(|e| Error::Parse(format!("bad tight index: {e}")))?;
        if tight.len() != incidence_count {
            return Err(Error::Parse(format!(
                "tight-set size {} disagrees with incidence count {incidence_count}",
                tight.len()
            )));
        }
        out.push(ReportRecord {
            norm_sq,
            incidence_count,
            stabilizer_order,
            vertex: vertex?,
            tight,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// classified reports: orbit report fields plus name and shared/additional

pub fn write_classified_report(rows: &[ClassifiedRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let v: Vec<String> = r.vertex.iter().map(rat_str).collect();
        let kind = if r.shared { "shared" } else { "additional" };
        let delone = r
            .delone_count
            .map_or("-".to_string(), |c| c.to_string());
        out.push_str(&format!(
            "{} | {} | {} | {} | {} | {} | {}\n",
            r.name,
            rat_str(&r.norm_sq),
            r.n_count,
            r.stabilizer_order,
            kind,
            delone,
            v.join(" ")
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// checkpoints: a completed bank, resumable at stage granularity

pub fn write_checkpoint(group_order: u128, records: &[OrbitRecord]) -> String {
    format!(
        "CHECKPOINT {} {}\n{}",
        group_order,
        records.len(),
        write_orbit_report(records)
    )
}

pub fn parse_checkpoint(text: &str) -> Result<(u128, Vec<ReportRecord>)> {
    let mut lines = text.splitn(2, '\n');
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty checkpoint".into()))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("CHECKPOINT") {
        return Err(Error::Parse("checkpoint must start with 'CHECKPOINT g n'".into()));
    }
    let order: u128 = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad group order in checkpoint".into()))?;
    let n = parse_usize(toks.next(), "record count")?;
    let records = parse_orbit_report(lines.next().unwrap_or(""))?;
    if records.len() != n {
        return Err(Error::Parse(format!(
            "checkpoint announces {n} records but contains {}",
            records.len()
        )));
    }
    Ok((order, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_named_lattice, shortest_vectors, NamedLattice};

    #[test]
    fn lattice_file_roundtrip() {
        let l = build_named_lattice(&NamedLattice::An(3)).unwrap();
        let text = write_lattice_file(&l);
        let back = parse_lattice_file(&text).unwrap();
        assert_eq!(back.basis.rows, l.basis.rows);
        assert_eq!(back.ip_denom, l.ip_denom);
        assert_eq!(back.gram.rows, l.gram.rows);
    }

    #[test]
    fn min_file_roundtrip() {
        let l = build_named_lattice(&NamedLattice::Dn(4)).unwrap();
        let min = shortest_vectors(&l);
        let text = write_min_file(&min);
        let back = parse_min_file(&text).unwrap();
        assert_eq!(back.min_norm_sq, min.min_norm_sq);
        assert_eq!(back.vectors, min.vectors);
    }

    #[test]
    fn orbit_report_roundtrip() {
        let l = build_named_lattice(&NamedLattice::An(2)).unwrap();
        let min = shortest_vectors(&l);
        let poly = crate::polytope::contact_polar_from_min(&l, &min);
        let gens = crate::symmetry::named_automorphism_gens(&NamedLattice::An(2)).unwrap();
        let action = crate::symmetry::action_on_min(&gens, &min, &l).unwrap();
        let policy = crate::engine::RecursionPolicy::default();
        let records =
            crate::engine::enumerate_vertex_orbits(&poly, &action, &l.gram, None, policy).unwrap();
        let text = write_orbit_report(&records);
        let back = parse_orbit_report(&text).unwrap();
        assert_eq!(back.len(), records.len());
        for (p, r) in back.iter().zip(&records) {
            assert_eq!(p.norm_sq, r.norm_sq);
            assert_eq!(p.vertex, r.rep_vertex);
            assert_eq!(p.tight, r.tight.indices);
            assert_eq!(p.stabilizer_order, r.stabilizer_order);
        }
        let cp = write_checkpoint(12, &records);
        let (order, rec2) = parse_checkpoint(&cp).unwrap();
        assert_eq!(order, 12);
        assert_eq!(rec2, back);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        assert!(matches!(parse_lattice_file(""), Err(Error::Parse(_))));
        assert!(matches!(parse_lattice_file("L 2 2 1\n1 0"), Err(Error::Parse(_))));
        assert!(matches!(parse_min_file("MIN x 4"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_orbit_report("1 | 2 | 3"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_orbit_report("1 | 2 | 3 | 1 0 | 5"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_checkpoint("nope"), Err(Error::Parse(_))));
    }
}
