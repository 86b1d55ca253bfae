//! Text problem files.
//!
//! ```text
//! # minimize -u1, i.e. find the largest u1 with p - u1 SOS on the disc
//! nvars 2 ; degree 4
//! objective: -u1
//! constraint weighted[p=1 - x1^2 - x2^2]:
//!     x1^4 + x2^4 - x1*x2 - u1
//! constraint sos: x1^2 + u2*x2^2
//! ```
//!
//! The header fixes the number of `x` variables and the relaxation degree.
//! The objective is linear in the decision variables `u1, u2, ...` and is
//! minimized; it may be omitted for a feasibility problem. Each constraint
//! body is affine in the `u`s and must be SOS (`sos`), or of the form
//! `s₀ + Σ pᵢsᵢ` for the listed multipliers (`weighted[p=..., p=...]`).
//! Bodies may span lines; `#` starts a comment.

use std::collections::BTreeMap;

use crate::assembly::SosConstraintSpec;
use crate::error::{Result, SosError};
use crate::experiments::pop::GeneratedProblem;
use crate::poly::text::{parse_affine_at, parse_polynomial_at, AffinePolynomial};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile<T: Scalar> {
    pub num_vars: usize,
    pub degree_2d: u32,
    /// Weights of `min wᵀu`.
    pub objective: Vec<T>,
    pub objective_offset: T,
    pub constraints: Vec<SosConstraintSpec<T>>,
}

impl<T: Scalar> ProblemFile<T> {
    pub fn num_decision_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn into_generated(self) -> GeneratedProblem<T> {
        GeneratedProblem {
            specs: self.constraints,
            w: self.objective,
            objective_sign: T::one(),
            objective_offset: self.objective_offset,
        }
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> SosError {
    SosError::Parse {
        line,
        column,
        message: message.into(),
    }
}

enum SectionKind {
    Objective,
    Sos,
    Weighted(Vec<(String, usize)>),
}

struct Section {
    kind: SectionKind,
    line: usize,
    column: usize,
    body: String,
}

/// Blank out comments so byte columns stay aligned with the source.
fn strip_comment(line: &str) -> String {
    match line.find('#') {
        Some(k) => format!("{}{}", &line[..k], " ".repeat(line.len() - k)),
        None => line.to_string(),
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, u32)> {
    let mut parts = line.split(';');
    let mut field = |name: &str| -> Result<u64> {
        let part = parts
            .next()
            .ok_or_else(|| parse_err(lineno, line.len() + 1, format!("missing `{name}` in header")))?;
        let col = line.find(part.trim()).map_or(1, |k| k + 1);
        let mut words = part.split_whitespace();
        if words.next() != Some(name) {
            return Err(parse_err(lineno, col, format!("expected `{name} <value>`")));
        }
        let value = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| parse_err(lineno, col, format!("`{name}` needs a nonnegative integer")))?;
        if words.next().is_some() {
            return Err(parse_err(lineno, col, "unexpected text in header"));
        }
        Ok(value)
    };
    let n = field("nvars")?;
    let d = field("degree")?;
    if parts.next().is_some() {
        return Err(parse_err(lineno, 1, "unexpected text after header"));
    }
    if n == 0 {
        return Err(parse_err(lineno, 1, "nvars must be positive"));
    }
    let d = u32::try_from(d).map_err(|_| parse_err(lineno, 1, "degree too large"))?;
    Ok((n as usize, d))
}

fn parse_section_head(line: &str, lineno: usize) -> Result<Option<(SectionKind, usize)>> {
    let trimmed = line.trim_start();
    let indent = line.len() - trimmed.len();
    let Some(colon) = trimmed.find(':') else {
        return Ok(None);
    };
    let head = trimmed[..colon].trim_end();
    if !(head == "objective" || head.starts_with("constraint")) {
        return Ok(None);
    }
    let body_col = indent + colon + 2;
    if head == "objective" {
        return Ok(Some((SectionKind::Objective, body_col)));
    }
    let rest = head["constraint".len()..].trim_start();
    let rest_col = indent + head.len() - rest.len() + 1;
    if rest == "sos" {
        return Ok(Some((SectionKind::Sos, body_col)));
    }
    if let Some(inner) = rest.strip_prefix("weighted[").and_then(|r| r.strip_suffix(']')) {
        let mut multipliers = Vec::new();
        let mut offset = rest_col + "weighted[".len();
        for item in inner.split(',') {
            let lead = item.len() - item.trim_start().len();
            let Some(poly) = item.trim_start().strip_prefix("p=") else {
                return Err(parse_err(lineno, offset + lead, "expected `p=<polynomial>`"));
            };
            multipliers.push((poly.to_string(), offset + lead + 2));
            offset += item.len() + 1;
        }
        return Ok(Some((SectionKind::Weighted(multipliers), body_col)));
    }
    Err(parse_err(
        lineno,
        rest_col,
        "expected `constraint sos:` or `constraint weighted[p=...]:`",
    ))
}

pub fn parse_problem<T: Scalar>(text: &str) -> Result<ProblemFile<T>> {
    let mut header = None;
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = strip_comment(raw);
        if header.is_none() {
            if line.trim().is_empty() {
                continue;
            }
            header = Some(parse_header(&line, lineno)?);
            continue;
        }
        if let Some((kind, col)) = parse_section_head(&line, lineno)? {
            let body = line.get(col - 1..).unwrap_or("").to_string();
            sections.push(Section {
                kind,
                line: lineno,
                column: col,
                body,
            });
        } else if let Some(sec) = sections.last_mut() {
            sec.body.push('\n');
            sec.body.push_str(&line);
        } else if !line.trim().is_empty() {
            let col = line.len() - line.trim_start().len() + 1;
            return Err(parse_err(lineno, col, "expected `objective:` or `constraint ...:`"));
        }
    }
    let (n, degree_2d) = header.ok_or_else(|| parse_err(1, 1, "missing `nvars <n> ; degree <2d>` header"))?;

    let mut objective: Option<(AffinePolynomial<T>, usize, usize)> = None;
    let mut bodies = Vec::new();
    for sec in sections {
        let affine = parse_affine_at::<T>(&sec.body, n, sec.line, sec.column)?;
        match sec.kind {
            SectionKind::Objective => {
                if objective.is_some() {
                    return Err(parse_err(sec.line, 1, "duplicate objective"));
                }
                objective = Some((affine, sec.line, sec.column));
            }
            SectionKind::Sos => bodies.push((affine, None, sec.line)),
            SectionKind::Weighted(ms) => {
                let polys = ms
                    .iter()
                    .map(|(src, col)| parse_polynomial_at::<T>(src, n, sec.line, *col))
                    .collect::<Result<Vec<_>>>()?;
                bodies.push((affine, Some(polys), sec.line));
            }
        }
    }
    if bodies.is_empty() {
        return Err(parse_err(text.lines().count().max(1), 1, "no constraints"));
    }

    let t = bodies
        .iter()
        .map(|(a, _, _)| a.num_decision_vars())
        .chain(objective.as_ref().map(|(a, _, _)| a.num_decision_vars()))
        .max()
        .unwrap_or(0);

    let mut w = vec![T::zero(); t];
    let mut offset = T::zero();
    if let Some((obj, line, col)) = &objective {
        if obj.constant.degree() > 0 || obj.linear.values().any(|p| p.degree() > 0) {
            return Err(parse_err(*line, *col, "objective must not depend on x"));
        }
        offset = constant_of(&obj.constant);
        for (&k, p) in &obj.linear {
            w[k] = constant_of(p);
        }
    }

    let mut constraints = Vec::with_capacity(bodies.len());
    for (affine, multipliers, line) in bodies {
        let g0 = affine.constant;
        let g = (0..t).map(|k| affine.linear.get(&k).map_or_else(|| Polynomial::zero(n), Polynomial::neg)).collect();
        let spec = match multipliers {
            None => SosConstraintSpec::scalar(g0, g, degree_2d),
            Some(ps) => SosConstraintSpec::weighted(g0, g, ps, degree_2d),
        };
        constraints.push(spec.map_err(|e| parse_err(line, 1, e.to_string()))?);
    }
    Ok(ProblemFile {
        num_vars: n,
        degree_2d,
        objective: w,
        objective_offset: offset,
        constraints,
    })
}

fn constant_of<T: Scalar>(p: &Polynomial<T>) -> T {
    p.terms().values().next().copied().unwrap_or_else(T::zero)
}

/// Human-readable summary of the per-constraint decision usage, used by `assemble`.
pub fn decision_usage<T: Scalar>(file: &ProblemFile<T>) -> BTreeMap<usize, usize> {
    let mut usage = BTreeMap::new();
    for spec in &file.constraints {
        for (k, g) in spec.g().iter().enumerate() {
            if g.entries().iter().any(|p| !p.is_zero()) {
                *usage.entry(k).or_insert(0) += 1;
            }
        }
    }
    usage
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::SosKind;

    const SAMPLE: &str = "# demo\nnvars 2 ; degree 4\nobjective: -u1 + 3\nconstraint weighted[p=1 - x1^2 - x2^2]:\n    x1^4 + x2^4\n    - x1*x2 - u1  # trailing\nconstraint sos: x1^2 + u2*x2^2\n";

    #[test]
    fn parses_sample() {
        let f: ProblemFile<f64> = parse_problem(SAMPLE).unwrap();
        assert_eq!((f.num_vars, f.degree_2d), (2, 4));
        assert_eq!(f.objective, vec![-1.0, 0.0]);
        assert_eq!(f.objective_offset, 3.0);
        assert_eq!(f.constraints.len(), 2);
        assert!(matches!(f.constraints[0].kind(), SosKind::Weighted { multipliers } if multipliers.len() == 1));
        let g = f.constraints[0].g();
        assert_eq!(g[0].get(0, 0), &Polynomial::constant(2, 1.0));
        assert!(g[1].get(0, 0).is_zero());
        let g1 = f.constraints[1].g();
        assert_eq!(g1[1].get(0, 0).num_terms(), 1);
    }

    #[test]
    fn error_positions() {
        let bad = "nvars 1 ; degree 2\nconstraint sos:\n  x1^2 +\n  2x1\n";
        match parse_problem::<f64>(bad).unwrap_err() {
            SosError::Parse { line, column, .. } => assert_eq!((line, column), (4, 4)),
            e => panic!("{e:?}"),
        }
        let bad = "nvars 1 ; degree 2\nconstraint sos: x1^2 + x2\n";
        match parse_problem::<f64>(bad).unwrap_err() {
            SosError::Parse { line, column, .. } => assert_eq!((line, column), (2, 24)),
            e => panic!("{e:?}"),
        }
        let bad = "nvars two ; degree 2\n";
        assert!(matches!(parse_problem::<f64>(bad).unwrap_err(), SosError::Parse { line: 1, .. }));
        let bad = "nvars 1 ; degree 2\nconstraint maybe: x1\n";
        match parse_problem::<f64>(bad).unwrap_err() {
            SosError::Parse { line, column, .. } => assert_eq!((line, column), (2, 12)),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn rejects_x_in_objective_and_odd_degree() {
        assert!(parse_problem::<f64>("nvars 1 ; degree 2\nobjective: x1*u1\nconstraint sos: x1^2\n").is_err());
        assert!(parse_problem::<f64>("nvars 1 ; degree 3\nconstraint sos: x1^2\n").is_err());
        assert!(parse_problem::<f64>("nvars 1 ; degree 2\n").is_err());
    }
}
