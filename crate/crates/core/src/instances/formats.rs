//! Text formats. Writers are byte-stable; numbers use the shortest
//! representation that reads back to the same `f64`.

use crate::error::{Error, Result};
use crate::linalg::CscMatrix;
use crate::model::{Arc, McfProblem, OtProblem, StandardLp};
use crate::simplex::{SimplexResult, SimplexStatus};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines<'a>(text: &'a str, comment: impl Fn(&str) -> bool + 'a) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !comment(l))
}

fn eof_line(text: &str) -> usize {
    text.lines().count() + 1
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

fn no_more<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(t) => Err(Error::parse(line, format!("unexpected token `{t}`"))),
        None => Ok(()),
    }
}

// ---------------------------------------------------------------- DIMACS

/// DIMACS minimum-cost flow: `p min NODES ARCS`, `n ID SUPPLY`,
/// `a TAIL HEAD LOW CAP COST` with 1-based node ids. Only zero lower bounds
/// are accepted; `inf` is read as an unbounded capacity.
pub fn read_dimacs(text: &str) -> Result<McfProblem> {
    let mut header: Option<(usize, usize)> = None;
    let mut supply = Vec::new();
    let mut arcs = Vec::new();
    let mut last = 0;
    for (line, l) in content_lines(text, |l| l.starts_with('c')) {
        last = line;
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line, "duplicate problem line"));
                }
                if toks.next() != Some("min") {
                    return Err(Error::parse(line, "expected `p min`"));
                }
                let nodes: usize = num(toks.next(), line, "node count")?;
                let count: usize = num(toks.next(), line, "arc count")?;
                no_more(toks, line)?;
                supply = vec![0.0; nodes];
                header = Some((nodes, count));
            }
            Some(kind @ ("n" | "a")) => {
                let (nodes, count) = header.ok_or_else(|| Error::parse(line, "record before problem line"))?;
                let node = |t: Option<&str>, what: &str| -> Result<usize> {
                    let id: usize = num(t, line, what)?;
                    if id == 0 || id > nodes {
                        return Err(Error::parse(line, format!("{what} {id} outside 1..={nodes}")));
                    }
                    Ok(id - 1)
                };
                if kind == "n" {
                    let id = node(toks.next(), "node id")?;
                    supply[id] = num(toks.next(), line, "supply")?;
                } else {
                    if arcs.len() == count {
                        return Err(Error::parse(line, format!("more than {count} arcs")));
                    }
                    let tail = node(toks.next(), "tail")?;
                    let head = node(toks.next(), "head")?;
                    let low: f64 = num(toks.next(), line, "lower bound")?;
                    if low != 0.0 {
                        return Err(Error::parse(line, "nonzero lower bounds are not supported"));
                    }
                    let capacity = num(toks.next(), line, "capacity")?;
                    let cost = num(toks.next(), line, "cost")?;
                    arcs.push(Arc {
                        tail,
                        head,
                        cost,
                        capacity,
                    });
                }
                no_more(toks, line)?;
            }
            Some(t) => return Err(Error::parse(line, format!("unknown record `{t}`"))),
            None => unreachable!("content lines are non-empty"),
        }
    }
    let (nodes, count) = header.ok_or_else(|| Error::parse(eof_line(text), "missing problem line"))?;
    if arcs.len() != count {
        return Err(Error::parse(
            eof_line(text).max(last + 1),
            format!("expected {count} arcs, found {} (truncated file?)", arcs.len()),
        ));
    }
    McfProblem::new(nodes, arcs, supply)
}

pub fn write_dimacs(p: &McfProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p min {} {}", p.num_nodes, p.num_arcs());
    for (i, b) in p.supply.iter().enumerate() {
        if *b != 0.0 {
            let _ = writeln!(out, "n {} {}", i + 1, b);
        }
    }
    for a in &p.arcs {
        let _ = writeln!(out, "a {} {} 0 {} {}", a.tail + 1, a.head + 1, a.capacity, a.cost);
    }
    out
}

// ---------------------------------------------------------------- OT text

/// `ot m n`, then the supplies, the demands, and `m` rows of `n` costs, one
/// record per line; `#` starts a comment line.
pub fn read_ot(text: &str) -> Result<OtProblem> {
    let mut lines = content_lines(text, |l| l.starts_with('#'));
    let eof = eof_line(text);
    let (line, head) = lines.next().ok_or_else(|| Error::parse(eof, "empty input"))?;
    let mut toks = head.split_whitespace();
    if toks.next() != Some("ot") {
        return Err(Error::parse(line, "expected `ot m n` header"));
    }
    let m: usize = num(toks.next(), line, "supplier count")?;
    let n: usize = num(toks.next(), line, "consumer count")?;
    no_more(toks, line)?;
    let mut row = |len: usize, what: &str| -> Result<Vec<f64>> {
        let (line, l) = lines
            .next()
            .ok_or_else(|| Error::parse(eof, format!("missing {what} (truncated file?)")))?;
        let vals: Vec<f64> = l
            .split_whitespace()
            .map(|t| num(Some(t), line, what))
            .collect::<Result<_>>()?;
        if vals.len() != len {
            return Err(Error::parse(line, format!("expected {len} {what} values, found {}", vals.len())));
        }
        Ok(vals)
    };
    let supply = row(m, "supply")?;
    let demand = row(n, "demand")?;
    let mut cost = Vec::with_capacity(m * n);
    for _ in 0..m {
        cost.extend(row(n, "cost")?);
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(line, "trailing data after cost matrix"));
    }
    OtProblem::new(supply, demand, cost)
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_ot(p: &OtProblem) -> String {
    let (m, n) = (p.num_suppliers(), p.num_consumers());
    let mut out = format!("ot {m} {n}\n{}\n{}\n", join(&p.supply), join(&p.demand));
    for i in 0..m {
        out.push_str(&join(&p.cost[i * n..(i + 1) * n]));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------- MPS

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Bounds,
    End,
}

/// MPS subset: NAME, ROWS (one `N` row and `E` rows), COLUMNS, RHS,
/// BOUNDS (`LO`, `UP`, `FR`), ENDATA. Fields are whitespace-separated and
/// `*` starts a comment line. Bounds apply in file order.
pub fn read_mps(text: &str) -> Result<StandardLp> {
    let mut section = Section::None;
    let mut objective: Option<String> = None;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut entries: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut c: Vec<f64> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    let mut lower: Vec<f64> = Vec::new();
    let mut upper: Vec<f64> = Vec::new();
    let mut current: Option<String> = None;
    for (line, l) in content_lines(text, |l| l.starts_with('*')) {
        if section == Section::End {
            return Err(Error::parse(line, "data after ENDATA"));
        }
        let mut toks = l.split_whitespace();
        let first = toks.next().expect("non-empty");
        let next_section = match first {
            "NAME" => Some(Section::None),
            "ROWS" => Some(Section::Rows),
            "COLUMNS" => Some(Section::Columns),
            "RHS" if toks.clone().next().is_none() => Some(Section::Rhs),
            "BOUNDS" => Some(Section::Bounds),
            "ENDATA" => Some(Section::End),
            _ => None,
        };
        if let Some(s) = next_section {
            if first != "NAME" {
                no_more(toks, line)?;
            }
            section = s;
            continue;
        }
        match section {
            Section::None | Section::End => return Err(Error::parse(line, format!("unexpected `{first}` outside a section"))),
            Section::Rows => {
                let name = toks.next().ok_or_else(|| Error::parse(line, "missing row name"))?;
                no_more(toks, line)?;
                match first {
                    "N" if objective.is_none() => objective = Some(name.to_string()),
                    "N" => return Err(Error::parse(line, "only one objective row is supported")),
                    "E" => {
                        if row_index.insert(name.to_string(), b.len()).is_some() {
                            return Err(Error::parse(line, format!("duplicate row `{name}`")));
                        }
                        b.push(0.0);
                    }
                    t => return Err(Error::parse(line, format!("unsupported row type `{t}`"))),
                }
            }
            Section::Columns => {
                if current.as_deref() != Some(first) {
                    if col_index.contains_key(first) {
                        return Err(Error::parse(line, format!("column `{first}` is not contiguous")));
                    }
                    col_index.insert(first.to_string(), c.len());
                    entries.push(Vec::new());
                    c.push(0.0);
                    lower.push(0.0);
                    upper.push(f64::INFINITY);
                    current = Some(first.to_string());
                }
                let j = c.len() - 1;
                let mut any = false;
                while let Some(row) = toks.next() {
                    let v: f64 = num(toks.next(), line, "coefficient")?;
                    any = true;
                    if Some(row) == objective.as_deref() {
                        c[j] = v;
                    } else {
                        let i = *row_index
                            .get(row)
                            .ok_or_else(|| Error::parse(line, format!("unknown row `{row}`")))?;
                        entries[j].push((i, v));
                    }
                }
                if !any {
                    return Err(Error::parse(line, "column record without entries"));
                }
            }
            Section::Rhs => {
                let mut any = false;
                while let Some(row) = toks.next() {
                    let v: f64 = num(toks.next(), line, "right-hand side")?;
                    any = true;
                    if Some(row) == objective.as_deref() {
                        continue;
                    }
                    let i = *row_index
                        .get(row)
                        .ok_or_else(|| Error::parse(line, format!("unknown row `{row}`")))?;
                    b[i] = v;
                }
                if !any {
                    return Err(Error::parse(line, "right-hand side record without entries"));
                }
            }
            Section::Bounds => {
                let _set = toks.next().ok_or_else(|| Error::parse(line, "missing bound set name"))?;
                let col = toks.next().ok_or_else(|| Error::parse(line, "missing column name"))?;
                let j = *col_index
                    .get(col)
                    .ok_or_else(|| Error::parse(line, format!("unknown column `{col}`")))?;
                match first {
                    "LO" => lower[j] = num(toks.next(), line, "bound")?,
                    "UP" => upper[j] = num(toks.next(), line, "bound")?,
                    "FR" => {
                        lower[j] = f64::NEG_INFINITY;
                        upper[j] = f64::INFINITY;
                    }
                    t => return Err(Error::parse(line, format!("unsupported bound type `{t}`"))),
                }
                no_more(toks, line)?;
            }
        }
    }
    if section != Section::End {
        return Err(Error::parse(eof_line(text), "missing ENDATA (truncated file?)"));
    }
    if objective.is_none() {
        return Err(Error::parse(eof_line(text), "no objective row"));
    }
    let m = b.len();
    StandardLp::new_allow_empty(CscMatrix::from_columns(m, entries), b, c, lower, upper)
}

pub fn write_mps(lp: &StandardLp, name: &str) -> String {
    let (m, n) = (lp.num_rows(), lp.num_cols());
    let mut out = format!("NAME {name}\nROWS\n N COST\n");
    for i in 0..m {
        let _ = writeln!(out, " E R{i}");
    }
    out.push_str("COLUMNS\n");
    for j in 0..n {
        if lp.c[j] != 0.0 || lp.a.col_nnz(j) == 0 {
            let _ = writeln!(out, "    X{j} COST {}", lp.c[j]);
        }
        for (i, v) in lp.a.col(j) {
            let _ = writeln!(out, "    X{j} R{i} {v}");
        }
    }
    out.push_str("RHS\n");
    for (i, v) in lp.b.iter().enumerate() {
        if *v != 0.0 {
            let _ = writeln!(out, "    RHS R{i} {v}");
        }
    }
    out.push_str("BOUNDS\n");
    for j in 0..n {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        if l == f64::NEG_INFINITY {
            let _ = writeln!(out, " FR BND X{j}");
        } else if l != 0.0 {
            let _ = writeln!(out, " LO BND X{j} {l}");
        }
        if u.is_finite() {
            let _ = writeln!(out, " UP BND X{j} {u}");
        }
    }
    out.push_str("ENDATA\n");
    out
}

// ---------------------------------------------------------------- solutions

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub status: SimplexStatus,
    pub objective: f64,
    /// Nonzero entries in ascending index order.
    pub entries: Vec<(usize, f64)>,
    /// Basic columns (0-based, logicals numbered after the structurals).
    pub basis: Vec<usize>,
}

impl Solution {
    pub fn from_result(res: &SimplexResult) -> Self {
        let mut basis = res.basis.basic.clone();
        basis.sort_unstable();
        Solution {
            status: res.status,
            objective: res.objective,
            entries: res.x.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect(),
            basis,
        }
    }

    pub fn to_dense(&self, n: usize) -> Result<Vec<f64>> {
        let mut x = vec![0.0; n];
        for &(j, v) in &self.entries {
            *x.get_mut(j).ok_or_else(|| Error::Dimension(format!("entry {j} beyond {n} columns")))? = v;
        }
        Ok(x)
    }
}

fn status_name(s: SimplexStatus) -> &'static str {
    match s {
        SimplexStatus::Optimal => "optimal",
        SimplexStatus::Infeasible => "infeasible",
        SimplexStatus::Unbounded => "unbounded",
        SimplexStatus::IterationLimit => "iteration_limit",
    }
}

/// `status`, `objective`, `nnz`, the `index value` pairs, then `basis`.
pub fn write_solution(s: &Solution) -> String {
    let mut out = format!(
        "status {}\nobjective {}\nnnz {}\n",
        status_name(s.status),
        s.objective,
        s.entries.len()
    );
    for (j, v) in &s.entries {
        let _ = writeln!(out, "{j} {v}");
    }
    out.push_str("basis");
    for j in &s.basis {
        let _ = write!(out, " {j}");
    }
    out.push('\n');
    out
}

pub fn read_solution(text: &str) -> Result<Solution> {
    let eof = eof_line(text);
    let mut lines = content_lines(text, |l| l.starts_with('#'));
    let mut keyed = |key: &str| -> Result<(usize, String)> {
        let (line, l) = lines
            .next()
            .ok_or_else(|| Error::parse(eof, format!("missing `{key}` line (truncated file?)")))?;
        let rest = l
            .strip_prefix(key)
            .filter(|r| key.is_empty() || r.is_empty() || r.starts_with(char::is_whitespace))
            .ok_or_else(|| Error::parse(line, format!("expected `{key}`")))?;
        Ok((line, rest.trim().to_string()))
    };
    let (line, st) = keyed("status")?;
    let status = match st.as_str() {
        "optimal" => SimplexStatus::Optimal,
        "infeasible" => SimplexStatus::Infeasible,
        "unbounded" => SimplexStatus::Unbounded,
        "iteration_limit" => SimplexStatus::IterationLimit,
        other => return Err(Error::parse(line, format!("unknown status `{other}`"))),
    };
    let (line, obj) = keyed("objective")?;
    let objective = num(Some(obj.as_str()), line, "objective")?;
    let (line, nnz) = keyed("nnz")?;
    let nnz: usize = num(Some(nnz.as_str()), line, "nonzero count")?;
    let mut entries = Vec::with_capacity(nnz);
    for _ in 0..nnz {
        let (line, l) = keyed("")?;
        let mut toks = l.split_whitespace();
        let j: usize = num(toks.next(), line, "index")?;
        let v: f64 = num(toks.next(), line, "value")?;
        no_more(toks, line)?;
        if entries.last().is_some_and(|&(k, _)| k >= j) {
            return Err(Error::parse(line, "indices must be strictly ascending"));
        }
        entries.push((j, v));
    }
    let (line, basis) = keyed("basis")?;
    let basis = basis
        .split_whitespace()
        .map(|t| num(Some(t), line, "basis index"))
        .collect::<Result<Vec<usize>>>()?;
    Ok(Solution {
        status,
        objective,
        entries,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_two_node_example() {
        let p = read_dimacs("p min 2 1\nn 1 1\nn 2 -1\na 1 2 0 10 3\n").unwrap();
        assert_eq!(p.num_nodes, 2);
        assert_eq!(p.supply, vec![1.0, -1.0]);
        assert_eq!(
            p.arcs,
            vec![Arc {
                tail: 0,
                head: 1,
                cost: 3.0,
                capacity: 10.0
            }]
        );
        assert_eq!(read_dimacs(&write_dimacs(&p)).unwrap(), p);
    }

    #[test]
    fn dimacs_truncated_names_line() {
        let err = read_dimacs("c demo\np min 2 2\nn 1 1\nn 2 -1\na 1 2 0 10 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 6, .. }), "{err}");
        let err = read_dimacs("p min 2 1\nn 3 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn ot_round_trip_with_comments() {
        let text = "# demo\not 2 3\n0.5 0.5\n0.2 0.3 0.5\n1 2 3\n# mid\n4 5 6\n";
        let p = read_ot(text).unwrap();
        assert_eq!(p.cost, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(read_ot(&write_ot(&p)).unwrap(), p);
        let err = read_ot("ot 2 2\n1 1\n1 1\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }));
    }

    #[test]
    fn mps_bounds_and_round_trip() {
        let text = "NAME demo\nROWS\n N obj\n E c1\nCOLUMNS\n    x obj 1 c1 1\n    y c1 1\n    z obj -1\nRHS\n    rhs c1 4\nBOUNDS\n UP b x 3\n FR b y\n LO b z -2\n UP b z 5\nENDATA\n";
        let lp = read_mps(text).unwrap();
        assert_eq!(lp.c, vec![1.0, 0.0, -1.0]);
        assert_eq!(lp.b, vec![4.0]);
        assert_eq!(lp.lower, vec![0.0, f64::NEG_INFINITY, -2.0]);
        assert_eq!(lp.upper, vec![3.0, f64::INFINITY, 5.0]);
        let again = read_mps(&write_mps(&lp, "demo")).unwrap();
        assert_eq!(again, lp);
    }

    #[test]
    fn mps_rejects_inequality_rows() {
        let err = read_mps("NAME\nROWS\n N obj\n L c1\nENDATA\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = read_mps("NAME\nROWS\n N obj\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
    }

    #[test]
    fn solution_round_trip() {
        let s = Solution {
            status: SimplexStatus::Optimal,
            objective: -2.5,
            entries: vec![(0, 1.0), (3, 0.25)],
            basis: vec![0, 3, 5],
        };
        let text = write_solution(&s);
        assert_eq!(text, "status optimal\nobjective -2.5\nnnz 2\n0 1\n3 0.25\nbasis 0 3 5\n");
        assert_eq!(read_solution(&text).unwrap(), s);
        assert_eq!(s.to_dense(4).unwrap(), vec![1.0, 0.0, 0.0, 0.25]);
        assert!(read_solution("status optimal\nobjective 1\nnnz 2\n0 1\n").is_err());
    }
}
