//! Problem instances, feasible solutions and per-component values.
//!
//! Two problem kinds are supported:
//!
//! * **assignment**: `n` components (agents) each take exactly one of `n`
//!   columns; `u` is an `n x n` matrix.
//! * **matching**: a complete graph on `2n` vertices, of which the first `n`
//!   are the GGI components. Utilities are given for pairs `i < j` and a
//!   selected edge `{i, j}` with `i < j` is credited to row `i` only.
//!
//! Random instances follow the correlated-utility scheme: each row draws a
//! base value uniformly from `{1, ..., 100}` and every other entry is the base
//! plus integer noise uniform on `[-d, d]`. Noisy values are kept verbatim,
//! so they can be zero or negative when `d` is large.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Utility of a pair inside the first half of a matching instance.
pub const FORBIDDEN_PAIR_UTILITY: i64 = -1000;

const FILE_MAGIC: &str = "fairopt-instance v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Assignment,
    Matching,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Assignment => "assignment",
            ProblemKind::Matching => "matching",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "assignment" => Ok(ProblemKind::Assignment),
            "matching" => Ok(ProblemKind::Matching),
            other => Err(Error::InvalidArgument(format!(
                "unsupported problem kind `{other}`"
            ))),
        }
    }
}

/// Generator parameters an instance was drawn with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub d: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    kind: ProblemKind,
    n: usize,
    /// Dense `dim x dim` utilities. For matching the matrix is symmetric with
    /// a zero diagonal; only `i < j` entries are meaningful.
    u: Vec<Vec<i64>>,
    provenance: Option<Provenance>,
}

impl Instance {
    /// Assignment instance from a square utility matrix.
    pub fn assignment(u: Vec<Vec<i64>>) -> Result<Self> {
        let n = u.len();
        if n == 0 {
            return Err(Error::InvalidArgument("assignment needs n >= 1".into()));
        }
        if let Some(row) = u.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        Ok(Self {
            kind: ProblemKind::Assignment,
            n,
            u,
            provenance: None,
        })
    }

    /// Matching instance on `2n` vertices from upper-triangular rows: row `i`
    /// holds `u[i][i+1..2n]`, for `i` in `0..2n-1`.
    pub fn matching(n: usize, upper: Vec<Vec<i64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matching needs n >= 1".into()));
        }
        let vertices = 2 * n;
        if upper.len() != vertices - 1 {
            return Err(Error::DimensionMismatch {
                expected: vertices - 1,
                found: upper.len(),
            });
        }
        let mut u = vec![vec![0i64; vertices]; vertices];
        for (i, row) in upper.iter().enumerate() {
            if row.len() != vertices - 1 - i {
                return Err(Error::DimensionMismatch {
                    expected: vertices - 1 - i,
                    found: row.len(),
                });
            }
            for (off, &val) in row.iter().enumerate() {
                let j = i + 1 + off;
                u[i][j] = val;
                u[j][i] = val;
            }
        }
        Ok(Self {
            kind: ProblemKind::Matching,
            n,
            u,
            provenance: None,
        })
    }

    /// Matching instance whose pair utilities come from `f(i, j)`, `i < j`.
    pub fn matching_from_fn(n: usize, mut f: impl FnMut(usize, usize) -> i64) -> Result<Self> {
        let vertices = 2 * n;
        let upper = (0..vertices.saturating_sub(1))
            .map(|i| ((i + 1)..vertices).map(|j| f(i, j)).collect())
            .collect();
        Self::matching(n, upper)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Number of GGI components.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side of the utility matrix: `n` for assignment, `2n` for matching.
    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    /// Assignment: utility of giving column `j` to component `i`.
    /// Matching: utility of the edge `{i, j}` (symmetric).
    pub fn utility(&self, i: usize, j: usize) -> i64 {
        self.u[i][j]
    }

    /// Rows of the upper triangle (matching) or the full matrix (assignment),
    /// in file order.
    pub fn utility_rows(&self) -> Vec<Vec<i64>> {
        match self.kind {
            ProblemKind::Assignment => self.u.clone(),
            ProblemKind::Matching => (0..self.dim() - 1)
                .map(|i| self.u[i][i + 1..].to_vec())
                .collect(),
        }
    }

    /// Short name in the `v<d>-<vertices>` style, when generated.
    pub fn name(&self) -> Option<String> {
        self.provenance.map(|p| format!("v{}-{}", p.d, 2 * self.n))
    }

    /// Checks that `sol` is a feasible selection for this instance.
    pub fn check(&self, sol: &Solution) -> Result<()> {
        match (self.kind, sol) {
            (ProblemKind::Assignment, Solution::Assignment { columns }) => {
                if columns.len() != self.n {
                    return Err(Error::Infeasible(format!(
                        "assignment of length {} for n = {}",
                        columns.len(),
                        self.n
                    )));
                }
                let mut seen = vec![false; self.n];
                for &c in columns {
                    if c >= self.n || seen[c] {
                        return Err(Error::Infeasible(format!(
                            "column {c} out of range or assigned twice"
                        )));
                    }
                    seen[c] = true;
                }
                Ok(())
            }
            (ProblemKind::Matching, Solution::Matching { mate }) => {
                let v = self.dim();
                if mate.len() != v {
                    return Err(Error::Infeasible(format!(
                        "matching over {} vertices for a {v}-vertex instance",
                        mate.len()
                    )));
                }
                for (a, &b) in mate.iter().enumerate() {
                    if b >= v || b == a || mate[b] != a {
                        return Err(Error::Infeasible(format!(
                            "vertex {a} is not matched consistently"
                        )));
                    }
                }
                Ok(())
            }
            _ => Err(Error::Infeasible(format!(
                "solution kind does not match a {} instance",
                self.kind
            ))),
        }
    }
}

/// A feasible binary selection.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Solution {
    /// `columns[i]` is the column given to component `i`.
    Assignment { columns: Vec<usize> },
    /// `mate[v]` is the vertex matched with `v`.
    Matching { mate: Vec<usize> },
}

impl Solution {
    pub fn matching_from_pairs(vertices: usize, pairs: &[(usize, usize)]) -> Self {
        let mut mate = vec![usize::MAX; vertices];
        for &(a, b) in pairs {
            mate[a] = b;
            mate[b] = a;
        }
        Solution::Matching { mate }
    }

    /// Matched pairs `(a, b)` with `a < b`, ordered by `a`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        match self {
            Solution::Assignment { columns } => columns.iter().copied().enumerate().collect(),
            Solution::Matching { mate } => mate
                .iter()
                .enumerate()
                .filter(|&(a, &b)| a < b)
                .map(|(a, &b)| (a, b))
                .collect(),
        }
    }

    /// Explicit binary matrix `z`. For matching only the upper triangle
    /// (`i < j`) is populated.
    pub fn z_matrix(&self) -> Vec<Vec<u8>> {
        let dim = match self {
            Solution::Assignment { columns } => columns.len(),
            Solution::Matching { mate } => mate.len(),
        };
        let mut z = vec![vec![0u8; dim]; dim];
        for (a, b) in self.pairs() {
            z[a][b] = 1;
        }
        z
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.pairs();
        let sep = match self {
            Solution::Assignment { .. } => "->",
            Solution::Matching { .. } => "-",
        };
        for (idx, (a, b)) in pairs.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{sep}{}", a + 1, b + 1)?;
        }
        Ok(())
    }
}

/// Per-component values `T_i = sum_j u_ij z_ij`.
pub fn agent_values(inst: &Instance, sol: &Solution) -> Result<Vec<f64>> {
    inst.check(sol)?;
    Ok(match sol {
        Solution::Assignment { columns } => columns
            .iter()
            .enumerate()
            .map(|(i, &c)| inst.utility(i, c) as f64)
            .collect(),
        Solution::Matching { mate } => (0..inst.n())
            .map(|i| {
                if mate[i] > i {
                    inst.utility(i, mate[i]) as f64
                } else {
                    0.0
                }
            })
            .collect(),
    })
}

fn stream_rng(kind: ProblemKind, n: usize, d: u32, seed: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(FILE_MAGIC.as_bytes());
    h.update(kind.as_str().as_bytes());
    h.update((n as u64).to_le_bytes());
    h.update(u64::from(d).to_le_bytes());
    h.update(seed.to_le_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Random correlated assignment instance.
///
/// The stream is a ChaCha8 generator keyed by SHA-256 of
/// `(magic, kind, n, d, seed)`. Rows are drawn in order; within a row the base
/// `u[i][0]` is drawn first, then the noise for columns `1..n`.
pub fn gen_assignment(n: usize, d: u32, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidArgument("assignment needs n >= 1".into()));
    }
    let mut rng = stream_rng(ProblemKind::Assignment, n, d, seed);
    let d = i64::from(d);
    let u = (0..n)
        .map(|_| {
            let base: i64 = rng.gen_range(1..=100);
            std::iter::once(base)
                .chain((1..n).map(|_| base + rng.gen_range(-d..=d)))
                .collect()
        })
        .collect();
    Ok(Instance::assignment(u)?.with_provenance(Provenance { d: d as u32, seed }))
}

/// Random correlated matching instance on `2n` vertices.
///
/// Pairs inside the first half carry [`FORBIDDEN_PAIR_UTILITY`]. Row `i` of
/// the first half draws a base for its edge to vertex `n` (0-based) and adds
/// noise for every later vertex. Rows of the second half draw their own base
/// the same way; those pairs never contribute to a component.
pub fn gen_matching(n: usize, d: u32, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidArgument("matching needs n >= 1".into()));
    }
    let vertices = 2 * n;
    let mut rng = stream_rng(ProblemKind::Matching, n, d, seed);
    let d = i64::from(d);
    let mut upper = Vec::with_capacity(vertices - 1);
    for i in 0..vertices - 1 {
        let mut row = Vec::with_capacity(vertices - 1 - i);
        if i < n {
            row.extend(std::iter::repeat_n(FORBIDDEN_PAIR_UTILITY, n - 1 - i));
            let base: i64 = rng.gen_range(1..=100);
            row.push(base);
            for _ in n + 1..vertices {
                row.push(base + rng.gen_range(-d..=d));
            }
        } else {
            let base: i64 = rng.gen_range(1..=100);
            for _ in i + 1..vertices {
                row.push(base + rng.gen_range(-d..=d));
            }
        }
        upper.push(row);
    }
    Ok(Instance::matching(n, upper)?.with_provenance(Provenance { d: d as u32, seed }))
}

pub fn generate(kind: ProblemKind, n: usize, d: u32, seed: u64) -> Result<Instance> {
    match kind {
        ProblemKind::Assignment => gen_assignment(n, d, seed),
        ProblemKind::Matching => gen_matching(n, d, seed),
    }
}

/// Serializes an instance in the line-oriented `fairopt-instance v1` format.
pub fn format_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{FILE_MAGIC}");
    let _ = writeln!(out, "kind {}", inst.kind);
    let _ = writeln!(out, "n {}", inst.n);
    if inst.kind == ProblemKind::Matching {
        let _ = writeln!(out, "vertices {}", inst.dim());
    }
    if let Some(p) = inst.provenance {
        let _ = writeln!(out, "provenance d={} seed={}", p.d, p.seed);
    }
    out.push_str("u\n");
    for row in inst.utility_rows() {
        let line: Vec<String> = row.iter().map(i64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_instance(inst))?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_instance(&text, path)
}

/// Parses the `fairopt-instance v1` format; `origin` is only used in errors.
pub fn parse_instance(text: &str, origin: impl Into<PathBuf>) -> Result<Instance> {
    let origin = origin.into();
    let err = |line: usize, message: String| Error::Parse {
        path: origin.clone(),
        line,
        message,
    };

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| err(0, format!("unexpected end of file, expected {what}")))
    };

    let (ln, magic) = next("header")?;
    if magic != FILE_MAGIC {
        return Err(err(ln, format!("expected `{FILE_MAGIC}`, found `{magic}`")));
    }

    let (ln, kind_line) = next("kind line")?;
    let kind = kind_line
        .strip_prefix("kind ")
        .ok_or_else(|| err(ln, "expected `kind <assignment|matching>`".into()))?
        .trim()
        .parse::<ProblemKind>()
        .map_err(|e| err(ln, e.to_string()))?;

    let (ln, n_line) = next("n line")?;
    let n = n_line
        .strip_prefix("n ")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| err(ln, "expected `n <positive int>`".into()))?;

    if kind == ProblemKind::Matching {
        let (ln, v_line) = next("vertices line")?;
        let vertices = v_line
            .strip_prefix("vertices ")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| err(ln, "expected `vertices <int>`".into()))?;
        if vertices != 2 * n {
            return Err(err(
                ln,
                format!("vertices {vertices} must equal 2n = {}", 2 * n),
            ));
        }
    }

    let (mut ln, mut line) = next("`u` or provenance line")?;
    let mut provenance = None;
    if let Some(rest) = line.strip_prefix("provenance ") {
        provenance = Some(
            parse_provenance(rest)
                .ok_or_else(|| err(ln, "expected `provenance d=<int> seed=<uint>`".into()))?,
        );
        (ln, line) = next("`u` line")?;
    }
    if line != "u" {
        return Err(err(ln, format!("expected `u`, found `{line}`")));
    }

    let (rows, width): (usize, Box<dyn Fn(usize) -> usize>) = match kind {
        ProblemKind::Assignment => (n, Box::new(move |_| n)),
        ProblemKind::Matching => (2 * n - 1, Box::new(move |i| 2 * n - 1 - i)),
    };
    let mut matrix = Vec::with_capacity(rows);
    for r in 0..rows {
        let (ln, row_line) = next(&format!("utility row {}", r + 1))
            .map_err(|_| err(ln + r + 1, format!("missing utility row {}", r + 1)))?;
        let row = row_line
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| err(ln, format!("utility row {}: {e}", r + 1)))?;
        if row.len() != width(r) {
            return Err(err(
                ln,
                format!(
                    "utility row {} has {} entries, expected {}",
                    r + 1,
                    row.len(),
                    width(r)
                ),
            ));
        }
        matrix.push(row);
    }
    for (ln, rest) in lines {
        if !rest.trim().is_empty() {
            return Err(err(
                ln,
                "unexpected content after the utility matrix".into(),
            ));
        }
    }

    let inst = match kind {
        ProblemKind::Assignment => Instance::assignment(matrix),
        ProblemKind::Matching => Instance::matching(n, matrix),
    }
    .map_err(|e| err(0, e.to_string()))?;
    Ok(match provenance {
        Some(p) => inst.with_provenance(p),
        None => inst,
    })
}

fn parse_provenance(rest: &str) -> Option<Provenance> {
    let mut d = None;
    let mut seed = None;
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("d=") {
            d = Some(v.parse().ok()?);
        } else if let Some(v) = tok.strip_prefix("seed=") {
            seed = Some(v.parse().ok()?);
        } else {
            return None;
        }
    }
    Some(Provenance { d: d?, seed: seed? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn assignment_d0_rows_constant() {
        for seed in 0..20 {
            let inst = gen_assignment(2, 0, seed).unwrap();
            for i in 0..2 {
                assert_eq!(inst.utility(i, 0), inst.utility(i, 1));
            }
        }
    }

    #[test]
    fn assignment_noise_bounded() {
        let inst = gen_assignment(5, 10, 7).unwrap();
        for i in 0..5 {
            let base = inst.utility(i, 0);
            assert!((1..=100).contains(&base));
            for j in 0..5 {
                assert!((inst.utility(i, j) - base).abs() <= 10);
            }
        }
        assert_eq!(
            gen_assignment(5, 50, 7).unwrap(),
            gen_assignment(5, 50, 7).unwrap()
        );
        assert_ne!(
            gen_assignment(5, 50, 7).unwrap(),
            gen_assignment(5, 50, 8).unwrap()
        );
    }

    #[test]
    fn matching_structure_n2() {
        for seed in 0..20 {
            let inst = gen_matching(2, 0, seed).unwrap();
            assert_eq!(inst.dim(), 4);
            assert_eq!(inst.utility(0, 1), FORBIDDEN_PAIR_UTILITY);
            assert_eq!(inst.utility(0, 2), inst.utility(0, 3));
            assert_eq!(inst.utility(1, 2), inst.utility(1, 3));
            assert!((1..=100).contains(&inst.utility(0, 2)));
            assert!((1..=100).contains(&inst.utility(1, 2)));
            assert!((1..=100).contains(&inst.utility(2, 3)));
        }
    }

    #[test]
    fn matching_first_half_forbidden() {
        let inst = gen_matching(6, 30, 3).unwrap();
        for i in 0..6 {
            for j in i + 1..6 {
                assert_eq!(inst.utility(i, j), FORBIDDEN_PAIR_UTILITY);
            }
            let base = inst.utility(i, 6);
            for j in 7..12 {
                assert!((inst.utility(i, j) - base).abs() <= 30);
            }
        }
        assert_eq!(
            gen_matching(6, 30, 3).unwrap(),
            gen_matching(6, 30, 3).unwrap()
        );
    }

    /// Frozen output of the generator stream; guards cross-platform
    /// reproducibility of benchmark instances.
    #[test]
    fn generator_stream_is_frozen() {
        let inst = gen_assignment(3, 10, 42).unwrap();
        assert_eq!(
            inst.utility_rows(),
            FROZEN_ASSIGNMENT_3_10_42.map(|r| r.to_vec()).to_vec()
        );
    }

    const FROZEN_ASSIGNMENT_3_10_42: [[i64; 3]; 3] = [[56, 57, 49], [94, 102, 93], [32, 32, 31]];

    #[test]
    fn agent_values_assignment() {
        let inst = Instance::assignment(vec![vec![5, 1], vec![2, 3]]).unwrap();
        let sol = Solution::Assignment {
            columns: vec![0, 1],
        };
        assert_eq!(agent_values(&inst, &sol).unwrap(), vec![5.0, 3.0]);
    }

    fn small_matching() -> Instance {
        // u12=-1000 u13=10 u14=1 u23=1 u24=20 u34=7
        Instance::matching(2, vec![vec![-1000, 10, 1], vec![1, 20], vec![7]]).unwrap()
    }

    /// Expands `T_i = sum_j u_ij z_ij` over the explicit upper-triangular `z`.
    fn values_via_z(inst: &Instance, sol: &Solution) -> Vec<f64> {
        let z = sol.z_matrix();
        (0..inst.n())
            .map(|i| {
                (0..inst.dim())
                    .filter(|&j| j > i || inst.kind() == ProblemKind::Assignment)
                    .map(|j| (inst.utility(i, j) * i64::from(z[i][j])) as f64)
                    .sum()
            })
            .collect()
    }

    #[test]
    fn agent_values_matching() {
        let inst = small_matching();
        let sol = Solution::matching_from_pairs(4, &[(0, 2), (1, 3)]);
        assert_eq!(agent_values(&inst, &sol).unwrap(), vec![10.0, 20.0]);
        let bad = Solution::matching_from_pairs(4, &[(0, 1), (2, 3)]);
        let t = agent_values(&inst, &bad).unwrap();
        assert_eq!(t, vec![-1000.0, 0.0]);
        assert_eq!(t, values_via_z(&inst, &bad));
    }

    #[test]
    fn agent_values_rejects_infeasible() {
        let inst = Instance::assignment(vec![vec![5, 1], vec![2, 3]]).unwrap();
        assert!(agent_values(
            &inst,
            &Solution::Assignment {
                columns: vec![0, 0]
            }
        )
        .is_err());
        assert!(agent_values(&inst, &Solution::Assignment { columns: vec![0] }).is_err());
        let m = small_matching();
        assert!(agent_values(
            &m,
            &Solution::Matching {
                mate: vec![2, 3, 0, 0]
            }
        )
        .is_err());
        assert!(agent_values(
            &m,
            &Solution::Assignment {
                columns: vec![0, 1]
            }
        )
        .is_err());
    }

    #[test]
    fn round_trip_generated() {
        let dir = tempfile::tempdir().unwrap();
        for inst in [
            gen_assignment(6, 50, 1).unwrap(),
            gen_matching(4, 10, 2).unwrap(),
            small_matching(),
        ] {
            let path = dir.path().join("x.inst");
            write_instance(&inst, &path).unwrap();
            assert_eq!(read_instance(&path).unwrap(), inst);
        }
    }

    #[test]
    fn file_layout_is_exact() {
        let inst = small_matching().with_provenance(Provenance { d: 3, seed: 9 });
        assert_eq!(
            format_instance(&inst),
            "fairopt-instance v1\nkind matching\nn 2\nvertices 4\nprovenance d=3 seed=9\nu\n-1000 10 1\n1 20\n7\n"
        );
    }

    #[test]
    fn parse_errors_name_the_line() {
        let tsp = "fairopt-instance v1\nkind tsp\nn 2\nu\n1 2\n3 4\n";
        match parse_instance(tsp, "t.inst") {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("tsp"));
            }
            other => panic!("unexpected {other:?}"),
        }

        let truncated = "fairopt-instance v1\nkind assignment\nn 3\nu\n1 2 3\n4 5\n7 8 9\n";
        match parse_instance(truncated, "t.inst") {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 6);
                assert!(message.contains("row 2"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }

        let missing = "fairopt-instance v1\nkind assignment\nn 3\nu\n1 2 3\n";
        match parse_instance(missing, "t.inst") {
            Err(Error::Parse { message, .. }) => assert!(message.contains("row 2"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }

        let bad_vertices = "fairopt-instance v1\nkind matching\nn 2\nvertices 5\nu\n";
        assert!(matches!(
            parse_instance(bad_vertices, "t.inst"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(parse_instance("fairopt-instance v2\n", "t.inst").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_text(kind in prop::bool::ANY, n in 1usize..7, d in 0u32..80, seed in any::<u64>()) {
            let kind = if kind { ProblemKind::Assignment } else { ProblemKind::Matching };
            let inst = generate(kind, n, d, seed).unwrap();
            prop_assert_eq!(parse_instance(&format_instance(&inst), "p").unwrap(), inst);
        }

        #[test]
        fn values_sum_to_inner_product(n in 1usize..6, d in 0u32..60, seed in any::<u64>(), kind in prop::bool::ANY) {
            use rand::seq::SliceRandom;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (inst, sol) = if kind {
                let inst = gen_assignment(n, d, seed).unwrap();
                let mut cols: Vec<usize> = (0..n).collect();
                cols.shuffle(&mut rng);
                (inst, Solution::Assignment { columns: cols })
            } else {
                let inst = gen_matching(n, d, seed).unwrap();
                let mut order: Vec<usize> = (0..2 * n).collect();
                order.shuffle(&mut rng);
                let pairs: Vec<_> = order.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
                (inst, Solution::matching_from_pairs(2 * n, &pairs))
            };
            let t = agent_values(&inst, &sol).unwrap();
            prop_assert_eq!(&t, &values_via_z(&inst, &sol));
            let z = sol.z_matrix();
            let inner: i64 = (0..inst.n())
                .flat_map(|i| (0..inst.dim()).map(move |j| (i, j)))
                .map(|(i, j)| inst.utility(i, j) * i64::from(z[i][j]))
                .sum();
            prop_assert_eq!(t.iter().sum::<f64>(), inner as f64);
        }
    }
}
