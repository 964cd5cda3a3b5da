use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use discgeom::geometry::Embedding;

/// An error with its machine-readable code and process exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: "CONFIG",
            message: message.into(),
            exit: 1,
        }
    }

    pub fn parse(path: &Path, line: usize, message: impl fmt::Display) -> Self {
        Self {
            code: "PARSE",
            message: format!("{}:{line}: {message}", path.display()),
            exit: 1,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: "IO",
            message: format!("{}: {err}", path.display()),
            exit: 1,
        }
    }

    pub fn numerical(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            exit: 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E:{}:{}", self.code, self.message)
    }
}

impl From<discgeom::Error> for CliError {
    fn from(e: discgeom::Error) -> Self {
        use discgeom::Error::*;
        let code = match &e {
            DimensionMismatch { .. } => "DIMENSION",
            InvalidWeights(_) => "WEIGHTS",
            InvalidMeasure(_) => "MEASURE",
            InvalidParameter(_) => "PARAMETER",
            InvalidPartition(_) => "PARTITION",
            Disconnected => "DISCONNECTED",
            NotStochastic { .. } => "NOT_STOCHASTIC",
            TooLarge { .. } => "TOO_LARGE",
            EigenNonConvergence { .. } => "EIGEN",
            Singular(_) => "SINGULAR",
        };
        Self {
            code,
            message: e.to_string(),
            exit: if e.is_numerical() { 2 } else { 1 },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Edge list to a dense weight matrix.
///
/// `#n=<int>` fixes the vertex count; other `#` lines are comments.
pub fn load_graph(path: &Path) -> CliResult<DMatrix<f64>> {
    let text = read(path)?;
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("n=") {
                let n = v
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| CliError::parse(path, lineno, format!("bad vertex count: {e}")))?;
                declared = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(CliError::parse(
                path,
                lineno,
                format!("expected 3 fields \"i j w\", found {}", fields.len()),
            ));
        }
        let vertex = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| CliError::parse(path, lineno, format!("bad vertex {s:?}: {e}")))
        };
        let i = vertex(fields[0])?;
        let j = vertex(fields[1])?;
        let w = fields[2]
            .parse::<f64>()
            .map_err(|e| CliError::parse(path, lineno, format!("bad weight {:?}: {e}", fields[2])))?;
        if !(w.is_finite() && w >= 0.0) {
            return Err(CliError::parse(path, lineno, format!("weight {w} must be finite and >= 0")));
        }
        if i == j {
            return Err(CliError::parse(path, lineno, format!("self-loop at vertex {i}")));
        }
        let key = (i.min(j), i.max(j));
        if let Some(&(prev, at)) = seen.get(&key) {
            let what = if prev == w { "duplicate" } else { "conflicting duplicate" };
            return Err(CliError::parse(
                path,
                lineno,
                format!("{what} edge {i}-{j} (first given on line {at})"),
            ));
        }
        seen.insert(key, (w, lineno));
        edges.push((i, j, w));
    }
    let from_edges = edges.iter().map(|&(i, j, _)| i.max(j) + 1).max();
    let n = match (declared, from_edges) {
        (Some(n), Some(m)) if m > n => {
            return Err(CliError::parse(
                path,
                0,
                format!("vertex {} exceeds declared #n={n}", m - 1),
            ))
        }
        (Some(n), _) => n,
        (None, Some(m)) => m,
        (None, None) => {
            return Err(CliError::parse(
                path,
                0,
                "no edges and no #n=<int> header; vertex count undeterminable",
            ))
        }
    };
    if n == 0 {
        return Err(CliError::parse(path, 0, "graph has no vertices"));
    }
    let mut w = DMatrix::zeros(n, n);
    for (i, j, v) in edges {
        w[(i, j)] = v;
        w[(j, i)] = v;
    }
    Ok(w)
}

/// One "i mu" line per vertex, every vertex exactly once.
pub fn load_measure(path: &Path, n: usize) -> CliResult<DVector<f64>> {
    let text = read(path)?;
    let mut mu = vec![f64::NAN; n];
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(CliError::parse(path, lineno, "expected 2 fields \"i mu\""));
        }
        let i = fields[0]
            .parse::<usize>()
            .map_err(|e| CliError::parse(path, lineno, format!("bad vertex: {e}")))?;
        let m = fields[1]
            .parse::<f64>()
            .map_err(|e| CliError::parse(path, lineno, format!("bad measure: {e}")))?;
        if i >= n {
            return Err(CliError::parse(path, lineno, format!("vertex {i} out of range for n = {n}")));
        }
        if !mu[i].is_nan() {
            return Err(CliError::parse(path, lineno, format!("vertex {i} given twice")));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(CliError::parse(path, lineno, format!("measure {m} must be > 0")));
        }
        mu[i] = m;
    }
    if let Some(i) = mu.iter().position(|m| m.is_nan()) {
        return Err(CliError::parse(path, 0, format!("no measure for vertex {i}")));
    }
    Ok(DVector::from_vec(mu))
}

/// CSV of decimal numbers with a constant column count.
pub fn load_points(path: &Path, header: bool) -> CliResult<Embedding> {
    let text = read(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate().skip(usize::from(header)) {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(col, cell)| {
                cell.trim().parse::<f64>().map_err(|_| {
                    CliError::parse(
                        path,
                        lineno,
                        format!("row {}: non-numeric cell {:?} in column {col}", rows.len(), cell.trim()),
                    )
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::parse(
                    path,
                    lineno,
                    format!("row {} has {} columns, expected {}", rows.len(), row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::parse(path, 0, "no data rows"));
    }
    Ok(Embedding::from_rows(&rows)?)
}

/// Lines "i<TAB>v1,...,vd": boundary vertices and their values.
pub fn load_boundary(path: &Path) -> CliResult<(Vec<usize>, DMatrix<f64>)> {
    let text = read(path)?;
    let mut idx_list = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, rest) = line
            .split_once(|c: char| c.is_whitespace())
            .ok_or_else(|| CliError::parse(path, lineno, "expected \"i<TAB>v1,...,vd\""))?;
        let i = head
            .parse::<usize>()
            .map_err(|e| CliError::parse(path, lineno, format!("bad vertex: {e}")))?;
        if idx_list.contains(&i) {
            return Err(CliError::parse(path, lineno, format!("vertex {i} given twice")));
        }
        let vals = rest
            .trim()
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::parse(path, lineno, format!("non-numeric value {:?}", s.trim())))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if vals.len() != first.len() {
                return Err(CliError::parse(path, lineno, "inconsistent value dimension"));
            }
        }
        idx_list.push(i);
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(CliError::parse(path, 0, "no boundary values"));
    }
    let d = rows[0].len();
    let values = DMatrix::from_fn(rows.len(), d, |r, s| rows[r][s]);
    Ok((idx_list, values))
}

/// 17 significant digits, negative zero printed as zero.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// A float serialized with [`fmt_f64`]; non-finite values become `null`.
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(fmt_f64(self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

pub fn nums(v: impl IntoIterator<Item = f64>) -> Vec<Num> {
    v.into_iter().map(Num).collect()
}

pub const SCHEMA: &str = "discgeom/1";

pub fn matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::numerical("SERIALIZE", e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}
