//! Text format for group definitions.
//!
//! ```text
//! # comments start with '#'
//! perm 4            # degree optional, inferred from the largest point
//! (1,2)(3,4)
//! (1,2,3)
//! end
//! ```
//!
//! `table n` blocks list `n` rows of `n` entries each; `matfp p` blocks list one
//! generator matrix per line with rows separated by `;`.

use std::sync::Arc;

use super::finite::{Caps, FiniteGroup};
use super::law::{MatFpLaw, PermLaw};
use crate::error::{Error, Result};
use crate::linalg::is_prime;

enum Block {
    Perm(Option<usize>),
    Table(usize),
    MatFp(u32),
}

pub fn parse_group_file(text: &str, caps: &Caps) -> Result<FiniteGroup> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty group file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let num = |s: Option<&&str>, what: &str| -> Result<u64> {
        s.ok_or_else(|| Error::parse(hline, format!("missing {what}")))?
            .parse()
            .map_err(|_| Error::parse(hline, format!("bad {what}")))
    };
    let block = match words[0] {
        "perm" => Block::Perm(if words.len() > 1 { Some(num(words.get(1), "degree")? as usize) } else { None }),
        "table" => Block::Table(num(words.get(1), "table size")? as usize),
        "matfp" => {
            let p = num(words.get(1), "prime")?;
            if !is_prime(p) {
                return Err(Error::parse(hline, format!("{p} is not prime")));
            }
            Block::MatFp(p as u32)
        }
        other => return Err(Error::parse(hline, format!("unknown block `{other}`"))),
    };

    let mut body = Vec::new();
    let mut ended = false;
    for (n, l) in lines.by_ref() {
        if l == "end" {
            ended = true;
            break;
        }
        body.push((n, l));
    }
    if !ended {
        let last = body.last().map_or(hline, |(n, _)| *n);
        return Err(Error::parse(last, "block is missing `end`"));
    }
    if let Some((n, _)) = lines.next() {
        return Err(Error::parse(n, "content after `end`"));
    }

    match block {
        Block::Perm(degree) => {
            let mut gens = Vec::new();
            for (n, l) in &body {
                gens.push((*n, parse_cycles(l).map_err(|m| Error::parse(*n, m))?));
            }
            let max_pt = gens.iter().flat_map(|(_, c)| c.iter().flatten()).copied().max().unwrap_or(1);
            let degree = degree.unwrap_or(max_pt);
            if max_pt > degree {
                return Err(Error::parse(hline, format!("point {max_pt} exceeds degree {degree}")));
            }
            let law = PermLaw::new(degree);
            let elems = gens
                .iter()
                .map(|(n, c)| law.from_cycles(c).map_err(|e| Error::parse(*n, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            FiniteGroup::close_generators(&elems, Arc::new(law), caps)
        }
        Block::Table(size) => {
            if body.len() != size {
                return Err(Error::parse(hline, format!("expected {size} rows, found {}", body.len())));
            }
            let mut rows = Vec::new();
            for (n, l) in &body {
                let row = l
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<u32>().map_err(|_| Error::parse(*n, format!("bad entry `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != size {
                    return Err(Error::parse(*n, format!("expected {size} entries, found {}", row.len())));
                }
                rows.push(row);
            }
            FiniteGroup::from_table(rows, caps).map_err(|e| Error::parse(hline, e.to_string()))
        }
        Block::MatFp(p) => {
            let mut mats = Vec::new();
            let mut dim = None;
            for (n, l) in &body {
                let rows: Vec<Vec<u32>> = l
                    .split(';')
                    .map(|r| {
                        r.split(|c: char| c.is_whitespace() || c == ',')
                            .filter(|t| !t.is_empty())
                            .map(|t| {
                                t.parse::<i64>()
                                    .map(|v| v.rem_euclid(p as i64) as u32)
                                    .map_err(|_| Error::parse(*n, format!("bad entry `{t}`")))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let d = rows.len();
                if rows.iter().any(|r| r.len() != d) {
                    return Err(Error::parse(*n, "matrix is not square"));
                }
                if *dim.get_or_insert(d) != d {
                    return Err(Error::parse(*n, "matrices of different sizes"));
                }
                mats.push((*n, rows.concat()));
            }
            let law = MatFpLaw::new(p, dim.unwrap_or(1));
            for (n, m) in &mats {
                use super::law::ElementLaw;
                law.inv(m).map_err(|e| Error::parse(*n, e.to_string()))?;
            }
            let elems: Vec<Vec<u32>> = mats.into_iter().map(|(_, m)| m).collect();
            FiniteGroup::close_generators(&elems, Arc::new(law), caps)
        }
    }
}

/// Parses cycle notation such as `(1,2)(3,4,5)` or `(1 2)`; `()` is the identity.
pub fn parse_cycles(s: &str) -> std::result::Result<Vec<Vec<usize>>, String> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(|| format!("expected `(` in `{s}`"))?;
        let close = inner.find(')').ok_or_else(|| format!("unclosed cycle in `{s}`"))?;
        let pts = inner[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| format!("bad point `{t}`")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if pts.contains(&0) {
            return Err("points are numbered from 1".into());
        }
        if !pts.is_empty() {
            cycles.push(pts);
        }
        rest = inner[close + 1..].trim_start();
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_block() {
        let g = parse_group_file("# S4\nperm\n(1,2)\n(1,2,3,4)\nend\n", &Caps::default()).unwrap();
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn table_block() {
        let text = "table 3\n0 1 2\n1 2 0\n2 0 1\nend";
        assert_eq!(parse_group_file(text, &Caps::default()).unwrap().order(), 3);
    }

    #[test]
    fn matfp_block() {
        // SL(2,3) elements generating the quaternion group.
        let text = "matfp 3\n0 2; 1 0\n1 1; 1 2\nend";
        let g = parse_group_file(text, &Caps::default()).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.center().order(), 2);
    }

    #[test]
    fn errors_report_lines() {
        let err = parse_group_file("perm\n(1,2)\n(1,x)\nend", &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_group_file("table 2\n0 1\n1 1\nend", &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_group_file("perm\n(1,2)\n", &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_group_file("matfp 4\nend", &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_group_file("matfp 3\n1 1; 1 1\nend", &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
