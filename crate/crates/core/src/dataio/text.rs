//! Plain-text readers for paired samples, count tables and joint laws.

use crate::error::{Error, Result};
use crate::estimators::{ContingencyTable, PairedSample};
use crate::population::{JointDistribution, Margin};

fn parse_real(token: &str, line: usize) -> Result<f64> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::parse(
            line,
            format!("'{token}' is not a finite number"),
        )),
    }
}

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Two numeric columns separated by commas or whitespace. A first row that
/// does not parse as numbers is taken as a header. Blank lines are skipped.
pub fn parse_pairs(text: &str) -> Result<PairedSample> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut seen_row = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let cells = fields(raw);
        if cells.is_empty() {
            continue;
        }
        let first_row = !seen_row;
        seen_row = true;
        if first_row && cells.iter().any(|c| c.parse::<f64>().is_err()) {
            continue;
        }
        if cells.len() != 2 {
            return Err(Error::parse(
                line,
                format!("expected 2 columns, found {}", cells.len()),
            ));
        }
        xs.push(parse_real(cells[0], line)?);
        ys.push(parse_real(cells[1], line)?);
    }
    if xs.is_empty() {
        return Err(Error::parse(last_line.max(1), "no data rows"));
    }
    PairedSample::new(xs, ys)
}

/// Rows of nonnegative integer counts, optionally preceded by
/// `rowscores: ...` and `colscores: ...` lines.
pub fn parse_table(text: &str) -> Result<ContingencyTable> {
    let mut row_scores: Option<(usize, Vec<f64>)> = None;
    let mut col_scores: Option<(usize, Vec<f64>)> = None;
    let mut counts: Vec<Vec<u64>> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        for (key, slot) in [
            ("rowscores:", &mut row_scores),
            ("colscores:", &mut col_scores),
        ] {
            if let Some(rest) = trimmed.strip_prefix(key) {
                if !counts.is_empty() {
                    return Err(Error::parse(
                        line,
                        format!("'{key}' must precede the counts"),
                    ));
                }
                let scores = fields(rest)
                    .into_iter()
                    .map(|t| parse_real(t, line))
                    .collect::<Result<Vec<_>>>()?;
                *slot = Some((line, scores));
            }
        }
        if trimmed.starts_with("rowscores:") || trimmed.starts_with("colscores:") {
            continue;
        }
        let row = fields(trimmed)
            .into_iter()
            .map(|t| {
                if t.starts_with('-') {
                    return Err(Error::parse(line, format!("negative count '{t}'")));
                }
                t.parse::<u64>()
                    .map_err(|_| Error::parse(line, format!("'{t}' is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = counts.first() {
            if first.len() != row.len() {
                return Err(Error::parse(
                    line,
                    format!("expected {} counts, found {}", first.len(), row.len()),
                ));
            }
        }
        counts.push(row);
    }
    if counts.is_empty() {
        return Err(Error::parse(last_line.max(1), "no count rows"));
    }
    let check = |s: &Option<(usize, Vec<f64>)>, k: usize, what: &str| -> Result<()> {
        if let Some((line, v)) = s {
            if v.len() != k {
                return Err(Error::parse(
                    *line,
                    format!("{what}: expected {k} scores, found {}", v.len()),
                ));
            }
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(
                    *line,
                    format!("{what} must be strictly increasing"),
                ));
            }
        }
        Ok(())
    };
    check(&row_scores, counts.len(), "row scores")?;
    check(&col_scores, counts[0].len(), "column scores")?;
    ContingencyTable::new(counts, row_scores.map(|s| s.1), col_scores.map(|s| s.1))
}

/// Tokens of a joint-law file with their line numbers; `#` starts a comment.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .flat_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            fields(body).into_iter().map(move |t| (i + 1, t))
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Kind {
    Real,
    Metric(usize),
}

/// Joint law file: a header `joint r c [KIND [KIND]]` with `KIND` either
/// `real` or `metric m` (one kind applies to both margins, two kinds to rows
/// and columns), then `r*c` probabilities in row-major order, the row values
/// and the column values (`m` reals per metric point).
pub fn parse_joint(text: &str) -> Result<JointDistribution> {
    let toks = tokens(text);
    let mut pos = 0;
    let end_line = toks.last().map_or(1, |t| t.0);
    let mut next = |what: &str| -> Result<(usize, &str)> {
        let t = toks.get(pos).copied().ok_or_else(|| {
            Error::parse(
                end_line,
                format!("unexpected end of input, expected {what}"),
            )
        })?;
        pos += 1;
        Ok(t)
    };
    let (line, head) = next("'joint' header")?;
    if head != "joint" {
        return Err(Error::parse(
            line,
            format!("expected 'joint', found '{head}'"),
        ));
    }
    let mut count = |what: &str| -> Result<usize> {
        let (line, t) = next(what)?;
        t.parse::<usize>().ok().filter(|&v| v > 0).ok_or_else(|| {
            Error::parse(
                line,
                format!("{what} must be a positive integer, found '{t}'"),
            )
        })
    };
    let rows = count("row count")?;
    let cols = count("column count")?;

    // Header kinds live on the header line only.
    let header_line = line;
    let mut kinds = Vec::new();
    while pos < toks.len() && toks[pos].0 == header_line && kinds.len() < 2 {
        let (line, t) = toks[pos];
        pos += 1;
        match t {
            "real" => kinds.push(Kind::Real),
            "metric" => {
                let (l2, m) = toks
                    .get(pos)
                    .copied()
                    .ok_or_else(|| Error::parse(line, "metric needs a dimension"))?;
                pos += 1;
                let m = m.parse::<usize>().ok().filter(|&v| v > 0).ok_or_else(|| {
                    Error::parse(
                        l2,
                        format!("metric dimension must be a positive integer, found '{m}'"),
                    )
                })?;
                kinds.push(Kind::Metric(m));
            }
            other => return Err(Error::parse(line, format!("unknown value kind '{other}'"))),
        }
    }
    if pos < toks.len() && toks[pos].0 == header_line {
        return Err(Error::parse(header_line, "too many header fields"));
    }
    let (row_kind, col_kind) = match kinds.as_slice() {
        [] => (Kind::Real, Kind::Real),
        [k] => (*k, *k),
        [a, b] => (*a, *b),
        _ => unreachable!(),
    };

    let mut reals = |k: usize, what: &str| -> Result<Vec<f64>> {
        (0..k)
            .map(|_| {
                let (line, t) = toks.get(pos).copied().ok_or_else(|| {
                    Error::parse(end_line, format!("unexpected end of input in {what}"))
                })?;
                pos += 1;
                parse_real(t, line)
            })
            .collect()
    };
    let probs = reals(rows * cols, "probabilities")?;
    let mut margin = |kind: Kind, k: usize, what: &str| -> Result<Margin> {
        Ok(match kind {
            Kind::Real => Margin::Real(reals(k, what)?),
            Kind::Metric(m) => Margin::Metric {
                dim: m,
                points: reals(k * m, what)?.chunks(m).map(<[f64]>::to_vec).collect(),
            },
        })
    };
    let row_values = margin(row_kind, rows, "row values")?;
    let col_values = margin(col_kind, cols, "column values")?;
    if let Some(&(line, t)) = toks.get(pos) {
        return Err(Error::parse(
            line,
            format!("unexpected trailing token '{t}'"),
        ));
    }
    JointDistribution::from_flat(rows, cols, probs, row_values, col_values)
}

/// Writes a table in the format read by [`parse_table`].
pub fn format_table(table: &ContingencyTable) -> String {
    let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!(
        "rowscores: {}\ncolscores: {}\n",
        join(table.row_scores()),
        join(table.col_scores())
    );
    for row in table.to_rows() {
        out.push_str(&row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out
}
