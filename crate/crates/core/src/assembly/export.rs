//! Problem exporters: SDPA sparse (`.dat-s`) and a JSON dump.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::assembly::problem::{Cone, ConicProblem};
use crate::error::{Result, SosError};
use crate::scalar::Scalar;

/// Write the problem in SDPA sparse format.
///
/// SDPA solves `max F0•Y  s.t.  Fi•Y = ci, Y ⪰ 0`, which is our primal with
/// `ci = b_i`, `F0 = −C`, and each free variable split as `u = u⁺ − u⁻`
/// across two diagonal (LP) blocks. The SDPA optimal value is therefore the
/// negated optimal value of `min cᵀξ`.
pub fn to_sdpa<T: Scalar>(problem: &ConicProblem<T>) -> String {
    let t = problem.t();
    let mut blocks: Vec<i64> = Vec::new();
    if t > 0 {
        blocks.push(-(t as i64));
        blocks.push(-(t as i64));
    }
    let psd: Vec<(usize, std::ops::Range<usize>)> = problem
        .cone_ranges()
        .into_iter()
        .filter_map(|(k, r)| match k {
            Cone::Psd(n) => Some((n, r)),
            Cone::Free(_) => None,
        })
        .collect();
    blocks.extend(psd.iter().map(|(n, _)| *n as i64));
    let first_psd = if t > 0 { 3 } else { 1 };

    // (matno, blk, i, j) -> value, with i <= j and 1-based indices.
    let mut entries: BTreeMap<(usize, usize, usize, usize), f64> = BTreeMap::new();
    let mut put = |key: (usize, usize, usize, usize), v: f64| {
        if v != 0.0 {
            *entries.entry(key).or_insert(0.0) += v;
        }
    };

    let c = problem.c();
    for k in 0..t {
        let w = c[k].as_f64();
        put((0, 1, k + 1, k + 1), -w);
        put((0, 2, k + 1, k + 1), w);
    }
    for (bi, (n, range)) in psd.iter().enumerate() {
        for (local, &v) in c[range.clone()].iter().enumerate() {
            let (p, q) = (local % n, local / n);
            let v = if p == q { v.as_f64() } else { v.as_f64() / 2.0 };
            put((0, first_psd + bi, p.min(q) + 1, p.max(q) + 1), -v);
        }
    }

    let a = problem.a();
    for col in 0..problem.num_cols() {
        let (rows, vals) = a.column(col);
        if col < t {
            for (&r, &v) in rows.iter().zip(vals) {
                put((r + 1, 1, col + 1, col + 1), v.as_f64());
                put((r + 1, 2, col + 1, col + 1), -v.as_f64());
            }
            continue;
        }
        let (bi, (n, range)) = psd
            .iter()
            .enumerate()
            .find(|(_, (_, r))| r.contains(&col))
            .expect("column covered by a cone");
        let local = col - range.start;
        let (p, q) = (local % n, local / n);
        for (&r, &v) in rows.iter().zip(vals) {
            let v = if p == q { v.as_f64() } else { v.as_f64() / 2.0 };
            put((r + 1, first_psd + bi, p.min(q) + 1, p.max(q) + 1), v);
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "\"sosadmm export: m={} t={} cols={} (SDPA value = -(min c'x))",
        problem.m(),
        t,
        problem.num_cols()
    );
    let _ = writeln!(out, "{}", problem.m());
    let _ = writeln!(out, "{}", blocks.len());
    let _ = writeln!(
        out,
        "{}",
        blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
    );
    let _ = writeln!(
        out,
        "{}",
        problem
            .b()
            .iter()
            .map(|v| v.as_f64().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    for ((mat, blk, i, j), v) in entries {
        if v != 0.0 {
            let _ = writeln!(out, "{mat} {blk} {i} {j} {v}");
        }
    }
    out
}

/// Parsed SDPA sparse file.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpaData {
    pub m: usize,
    pub blocks: Vec<i64>,
    pub c: Vec<f64>,
    /// (matno, block, i, j, value), 1-based as in the file.
    pub entries: Vec<(usize, usize, usize, usize, f64)>,
}

/// Minimal reader for SDPA sparse files (comments, `{}(),` separators).
pub fn read_sdpa(text: &str) -> Result<SdpaData> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| {
            let l = l.trim_start();
            !(l.is_empty() || l.starts_with('"') || l.starts_with('*'))
        })
        .map(|(i, l)| {
            let cleaned: String = l
                .chars()
                .map(|c| if "{}(),".contains(c) { ' ' } else { c })
                .collect();
            (i + 1, cleaned)
        });
    let bad = |line: usize, msg: &str| SosError::Parse {
        line,
        column: 1,
        message: msg.to_string(),
    };
    let mut next = |what: &str| lines.next().ok_or_else(|| bad(0, &format!("missing {what}")));

    let (ln, l) = next("mDIM")?;
    let m: usize = l.split_whitespace().next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(ln, "bad mDIM"))?;
    let (ln, l) = next("nBLOCK")?;
    let nblock: usize = l.split_whitespace().next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(ln, "bad nBLOCK"))?;
    let (ln, l) = next("block structure")?;
    let blocks: Vec<i64> = l
        .split_whitespace()
        .take(nblock)
        .map(|s| s.parse().map_err(|_| bad(ln, "bad block size")))
        .collect::<Result<_>>()?;
    if blocks.len() != nblock {
        return Err(bad(ln, "short block structure"));
    }
    let mut c = Vec::with_capacity(m);
    while c.len() < m {
        let (ln, l) = next("objective vector")?;
        for s in l.split_whitespace() {
            c.push(s.parse::<f64>().map_err(|_| bad(ln, "bad objective entry"))?);
        }
    }
    let mut entries = Vec::new();
    for (ln, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() < 5 {
            return Err(bad(ln, "entry needs 5 fields"));
        }
        let ints: Vec<usize> = f[..4]
            .iter()
            .map(|s| s.parse().map_err(|_| bad(ln, "bad entry index")))
            .collect::<Result<_>>()?;
        let v: f64 = f[4].parse().map_err(|_| bad(ln, "bad entry value"))?;
        entries.push((ints[0], ints[1], ints[2], ints[3], v));
    }
    Ok(SdpaData { m, blocks, c, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemDump {
    pub schema: u32,
    pub m: usize,
    pub t: usize,
    pub lowrank_width: usize,
    pub num_cols: usize,
    pub cones: Vec<Cone>,
    /// Triplets (row, col, value) of the low-rank block.
    pub a1: Vec<(usize, usize, f64)>,
    /// Triplets of the orthogonal block; columns relative to `lowrank_width`.
    pub a2: Vec<(usize, usize, f64)>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

pub fn to_dump<T: Scalar>(problem: &ConicProblem<T>) -> ProblemDump {
    let w = problem.lowrank_width();
    let (mut a1, mut a2) = (Vec::new(), Vec::new());
    for (r, c, v) in problem.a().triplets() {
        if c < w {
            a1.push((r, c, v.as_f64()));
        } else {
            a2.push((r, c - w, v.as_f64()));
        }
    }
    ProblemDump {
        schema: 1,
        m: problem.m(),
        t: problem.t(),
        lowrank_width: w,
        num_cols: problem.num_cols(),
        cones: problem.cones().to_vec(),
        a1,
        a2,
        b: problem.b().iter().map(|v| v.as_f64()).collect(),
        c: problem.c().iter().map(|v| v.as_f64()).collect(),
    }
}

pub fn to_json<T: Scalar>(problem: &ConicProblem<T>) -> String {
    serde_json::to_string_pretty(&to_dump(problem)).expect("problem dump serializes")
}
