//! Canned experiments over grids, families and coverage targets, with
//! per-cell result rows, consistency checks and CSV/JSON export.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificates::{
    audit_weighting, weight_delta_generic, weight_generic, weight_restricted, weight_square_claim, weight_standard,
    Weighting,
};
use crate::constructions::{
    construct_biregular, construct_square_threehalves, construct_standard, construct_wide, verify_cover,
};
use crate::cover::{phi, reference_bounds, solve_ilp, Cover, CoverInstance, IlpBudget, IlpStatus};
use crate::error::{Error, Result};
use crate::geometry::{Line, LineFamily};
use crate::grid::{delta_genericity, generic_grid, named_grid, rectangular_grid, standard_grid, Grid, GridKind};
use crate::rational::Rational;

/// CSV column order of [`ResultRow`].
pub const CSV_HEADER: [&str; 17] = [
    "experiment",
    "kind",
    "n",
    "m",
    "seed",
    "k",
    "family",
    "phi",
    "ilp",
    "ilp_status",
    "cert_name",
    "cert_total",
    "constr_name",
    "constr_size",
    "trivial_lb",
    "trivial_ub",
    "ball_serra",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSpec {
    Standard { n: usize },
    Rectangular { n: usize, m: usize },
    Exponential { n: usize },
    Quadratic { n: usize },
    Generic { n: usize, m: usize, seed: u64 },
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        match *self {
            GridSpec::Standard { n } => standard_grid(n),
            GridSpec::Rectangular { n, m } => rectangular_grid(n, m),
            GridSpec::Exponential { n } => named_grid(GridKind::Exponential, n),
            GridSpec::Quadratic { n } => named_grid(GridKind::Quadratic, n),
            GridSpec::Generic { n, m, seed } => generic_grid(n, m, seed),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GridSpec::Standard { .. } => "standard",
            GridSpec::Rectangular { .. } => "rectangular",
            GridSpec::Exponential { .. } => "exponential",
            GridSpec::Quadratic { .. } => "quadratic",
            GridSpec::Generic { .. } => "generic",
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        match *self {
            GridSpec::Standard { n } | GridSpec::Exponential { n } | GridSpec::Quadratic { n } => (n, n),
            GridSpec::Rectangular { n, m } | GridSpec::Generic { n, m, .. } => (n, m),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            GridSpec::Generic { seed, .. } => Some(seed),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilySel {
    Full,
    Restricted,
}

impl FamilySel {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySel::Full => "full",
            FamilySel::Restricted => "restricted",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    Wide,
    Biregular,
    ThreeHalves,
    Standard,
}

impl ConstructionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionKind::Wide => "wide",
            ConstructionKind::Biregular => "biregular",
            ConstructionKind::ThreeHalves => "threehalves",
            ConstructionKind::Standard => "standard",
        }
    }

    /// Builds the construction on `g` at coverage `k`.
    pub fn build(&self, g: &Grid, k: u64) -> Result<Cover> {
        match self {
            ConstructionKind::Wide => construct_wide(g, k),
            ConstructionKind::Biregular => construct_biregular(g, k),
            ConstructionKind::ThreeHalves => construct_square_threehalves(g, k),
            ConstructionKind::Standard => {
                if !g.is_standard() {
                    return Err(Error::NotStandardGrid);
                }
                construct_standard(g.n() as u64, k, None)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Generic,
    SquareClaim,
    /// Uses the grid's exact genericity parameter.
    DeltaGeneric,
    Standard,
    Restricted,
    /// The restricted-family weighting checked against the full family.
    RestrictedAudit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tasks {
    pub phi: bool,
    pub ilp: bool,
    /// Construction used to seed the ILP incumbent.
    pub warm_start: Option<ConstructionKind>,
    pub certificate: Option<CertificateKind>,
    pub construction: Option<ConstructionKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub grid: GridSpec,
    pub k: u64,
    pub family: FamilySel,
    pub tasks: Tasks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub id: String,
    pub cells: Vec<Cell>,
    pub budget_nodes: u64,
    pub budget_secs: u64,
}

impl ExperimentSpec {
    pub fn budget(&self) -> IlpBudget {
        IlpBudget { max_nodes: self.budget_nodes, max_time: std::time::Duration::from_secs(self.budget_secs) }
    }

    /// Replaces the per-instance time budget.
    pub fn with_budget_secs(mut self, secs: u64) -> Self {
        self.budget_secs = secs;
        self
    }
}

/// One computed cell. Exact values serialize as `p/q` strings; absent values
/// are empty CSV fields or JSON nulls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub seed: Option<u64>,
    pub k: u64,
    pub family: String,
    pub phi: Option<Rational>,
    pub ilp: Option<u64>,
    /// `optimal`, `timeout` or `skipped`.
    pub ilp_status: String,
    /// Certificate name; parameters that have no column of their own are
    /// appended in brackets, e.g. `delta_generic[delta=1]`.
    pub cert_name: String,
    /// `k` times the weighting total: the lower bound it certifies on `cov_k`.
    pub cert_total: Option<Rational>,
    pub constr_name: String,
    pub constr_size: Option<u64>,
    pub trivial_lb: u64,
    pub trivial_ub: u64,
    pub ball_serra: u64,
}

fn family_for(g: &Grid, sel: FamilySel) -> Result<LineFamily> {
    match sel {
        FamilySel::Full => Ok(crate::geometry::enumerate_lines(g)),
        FamilySel::Restricted => crate::geometry::restricted_lines(g, &crate::cover::ALL_RESTRICTED_SLOPES),
    }
}

fn certificate(g: &Grid, kind: CertificateKind) -> Result<(String, Weighting)> {
    Ok(match kind {
        CertificateKind::Generic => ("generic".into(), weight_generic(g)?),
        CertificateKind::SquareClaim => {
            let sc = weight_square_claim(g, None)?;
            (format!("square_claim[t={}]", sc.t), sc.weighting)
        }
        CertificateKind::DeltaGeneric => {
            let delta = delta_genericity(g);
            (format!("delta_generic[delta={delta}]"), weight_delta_generic(g, delta as u64)?)
        }
        CertificateKind::Standard => {
            require_standard(g)?;
            let s = weight_standard(g.n() as u64)?;
            (format!("standard[t={}]", s.t), s.weighting)
        }
        CertificateKind::Restricted => {
            require_standard(g)?;
            let r = weight_restricted(g.n() as u64, None)?;
            (format!("restricted[t={};z={}]", r.t, r.z), r.weighting)
        }
        CertificateKind::RestrictedAudit => {
            require_standard(g)?;
            let r = weight_restricted(g.n() as u64, None)?;
            let audit = audit_weighting(g, &r.weighting);
            let slopes: Vec<String> = audit.by_slope.keys().map(|s| s.to_string()).collect();
            let y_eq_x_plus_1 = Line::new(Rational::from(-1), Rational::one());
            let hit = audit.report.violations.iter().any(|(l, _)| *l == y_eq_x_plus_1);
            (
                format!(
                    "restricted_audit[violations={};slopes={};y=x+1:{};max={}]",
                    audit.report.violations.len(),
                    slopes.join("|"),
                    hit,
                    audit.report.max_line_weight
                ),
                r.weighting,
            )
        }
    })
}

fn require_standard(g: &Grid) -> Result<()> {
    if g.is_standard() {
        Ok(())
    } else {
        Err(Error::NotStandardGrid)
    }
}

/// Computes one cell. Budget exhaustion in the ILP is recorded in the row;
/// any other failure is an error.
pub fn run_cell(id: &str, cell: &Cell, budget: &IlpBudget) -> Result<ResultRow> {
    let g = cell.grid.build()?;
    let (n, m) = (g.n(), g.m());
    let bounds = reference_bounds(&g, cell.k);
    let mut row = ResultRow {
        experiment: id.to_string(),
        kind: cell.grid.kind().to_string(),
        n,
        m,
        seed: cell.grid.seed(),
        k: cell.k,
        family: cell.family.name().to_string(),
        phi: None,
        ilp: None,
        ilp_status: "skipped".into(),
        cert_name: String::new(),
        cert_total: None,
        constr_name: String::new(),
        constr_size: None,
        trivial_lb: bounds.trivial_lower,
        trivial_ub: bounds.trivial_upper,
        ball_serra: bounds.ball_serra,
    };

    if cell.tasks.phi || cell.tasks.ilp {
        let family = family_for(&g, cell.family)?;
        let inst = CoverInstance::new(g.clone(), family, cell.k)?;
        if cell.tasks.ilp {
            let warm = match cell.tasks.warm_start {
                Some(kind) => {
                    kind.build(&g, cell.k).ok().filter(|c| c.entries().keys().all(|l| inst.family.contains(l)))
                }
                None => None,
            };
            let r = solve_ilp(&inst, warm.as_ref(), budget)?;
            row.phi = Some(r.lp_root.clone());
            row.ilp = Some(r.optimum);
            row.ilp_status = match r.status {
                IlpStatus::Optimal => "optimal".into(),
                IlpStatus::Timeout => "timeout".into(),
            };
        } else {
            row.phi = Some(phi(&inst)?);
        }
    }

    if let Some(kind) = cell.tasks.certificate {
        let (name, w) = certificate(&g, kind)?;
        row.cert_name = name;
        row.cert_total = Some(w.total() * &Rational::from(cell.k));
    }

    if let Some(kind) = cell.tasks.construction {
        let c = kind.build(&g, cell.k)?;
        let report = verify_cover(&g, &c);
        if !report.valid {
            return Err(Error::HypothesisViolated(format!(
                "{} construction is not a {}-cover of {}",
                kind.name(),
                cell.k,
                g
            )));
        }
        row.constr_name = kind.name().into();
        row.constr_size = Some(c.size());
    }
    Ok(row)
}

/// Runs every cell of `spec` and returns rows in cell order. With `jobs > 1`
/// cells run on a worker pool of that size; results do not depend on `jobs`.
pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<Vec<ResultRow>> {
    let budget = spec.budget();
    if jobs <= 1 {
        return spec.cells.iter().map(|c| run_cell(&spec.id, c, &budget)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::BadParameter(format!("cannot start worker pool: {e}")))?;
    pool.install(|| spec.cells.par_iter().map(|c| run_cell(&spec.id, c, &budget)).collect())
}

fn cell(grid: GridSpec, k: u64, family: FamilySel, tasks: Tasks) -> Cell {
    Cell { grid, k, family, tasks }
}

const NO_TASKS: Tasks = Tasks { phi: false, ilp: false, warm_start: None, certificate: None, construction: None };

/// Wide grids `n = (k-1)(m-1)+1` and `+2`, `m <= 4`, `k <= 4`.
fn wide_cells() -> Vec<Cell> {
    let mut cells = Vec::new();
    for m in 2..=4usize {
        for k in 1..=4u64 {
            let base = (k as usize - 1) * (m - 1) + 1;
            let mut ns = vec![base.max(2), (base + 1).max(2)];
            ns.dedup();
            for n in ns {
                let tasks = Tasks {
                    ilp: true,
                    warm_start: Some(ConstructionKind::Wide),
                    construction: Some(ConstructionKind::Wide),
                    ..NO_TASKS
                };
                cells.push(cell(GridSpec::Rectangular { n, m }, k, FamilySel::Full, tasks));
            }
        }
    }
    cells
}

/// Smallest `k` for which the biregular construction exists on an
/// `n × m` grid: `(n+m-2)/gcd(n-1, m-1)`.
pub fn biregular_unit(n: usize, m: usize) -> u64 {
    ((n + m - 2) / (n - 1).gcd(&(m - 1))) as u64
}

fn generic_cells() -> Vec<Cell> {
    let mut cells = Vec::new();
    for n in 2..=6 {
        for m in 2..=6 {
            let tasks = Tasks {
                ilp: true,
                warm_start: Some(ConstructionKind::Biregular),
                certificate: Some(CertificateKind::Generic),
                construction: Some(ConstructionKind::Biregular),
                ..NO_TASKS
            };
            cells.push(cell(GridSpec::Generic { n, m, seed: 1 }, biregular_unit(n, m), FamilySel::Full, tasks));
        }
    }
    cells
}

fn ball_serra_cells() -> Vec<Cell> {
    let mut cells = Vec::new();
    for n in 3..=5 {
        let grids = [
            GridSpec::Standard { n },
            GridSpec::Exponential { n },
            GridSpec::Quadratic { n },
            GridSpec::Generic { n, m: n, seed: 1 },
        ];
        for grid in grids {
            for k in 1..=3 {
                let tasks = Tasks {
                    ilp: true,
                    warm_start: Some(ConstructionKind::ThreeHalves),
                    construction: Some(ConstructionKind::ThreeHalves),
                    ..NO_TASKS
                };
                cells.push(cell(grid, k, FamilySel::Full, tasks));
            }
        }
    }
    cells
}

fn standard_cells() -> Vec<Cell> {
    let mut cells = Vec::new();
    for n in 2..=8 {
        let tasks = Tasks {
            phi: true,
            certificate: Some(CertificateKind::Standard),
            construction: Some(ConstructionKind::Standard),
            ..NO_TASKS
        };
        cells.push(cell(GridSpec::Standard { n }, 1, FamilySel::Full, tasks));
    }
    for n in 2..=6 {
        for k in 1..=4 {
            for family in [FamilySel::Full, FamilySel::Restricted] {
                let tasks = Tasks {
                    ilp: true,
                    warm_start: Some(ConstructionKind::Standard),
                    certificate: Some(CertificateKind::Standard),
                    construction: Some(ConstructionKind::Standard),
                    ..NO_TASKS
                };
                cells.push(cell(GridSpec::Standard { n }, k, family, tasks));
            }
        }
    }
    cells
}

fn delta_cells() -> Vec<Cell> {
    let mut cells = Vec::new();
    for n in 3..=9 {
        for grid in [GridSpec::Exponential { n }, GridSpec::Quadratic { n }] {
            let tasks = Tasks { phi: n <= 6, certificate: Some(CertificateKind::DeltaGeneric), ..NO_TASKS };
            cells.push(cell(grid, 1, FamilySel::Full, tasks));
        }
    }
    cells
}

fn audit_cells() -> Vec<Cell> {
    [10, 20, 30, 40, 60]
        .into_iter()
        .map(|n| {
            let tasks = Tasks { certificate: Some(CertificateKind::RestrictedAudit), ..NO_TASKS };
            cell(GridSpec::Standard { n }, 1, FamilySel::Full, tasks)
        })
        .collect()
}

/// The six canned experiments, `E1` through `E6`.
pub fn experiment_suite() -> Vec<ExperimentSpec> {
    let spec = |id: &str, cells| ExperimentSpec { id: id.into(), cells, budget_nodes: 1_000_000, budget_secs: 60 };
    vec![
        spec("E1", wide_cells()),
        spec("E2", generic_cells()),
        spec("E3", ball_serra_cells()),
        spec("E4", standard_cells()),
        spec("E5", delta_cells()),
        spec("E6", audit_cells()),
    ]
}

/// Looks up one experiment of [`experiment_suite`] by id (case-insensitive).
pub fn experiment_by_id(id: &str) -> Option<ExperimentSpec> {
    experiment_suite().into_iter().find(|e| e.id.eq_ignore_ascii_case(id))
}

fn bracket_param(name: &str, key: &str) -> Option<u64> {
    let inner = name.split_once('[')?.1.trim_end_matches(']');
    inner.split(';').find_map(|kv| kv.strip_prefix(key)?.strip_prefix('=')?.parse().ok())
}

/// Checks the exact identities each experiment's rows must satisfy.
/// Returns one message per failed check; an empty list means all passed.
/// Rows whose ILP timed out are exempt from ILP equalities.
pub fn check_rows(rows: &[ResultRow]) -> Vec<String> {
    let mut failures = Vec::new();
    let mut fail = |r: &ResultRow, msg: String| {
        failures.push(format!("{} {} n={} m={} k={} {}: {msg}", r.experiment, r.kind, r.n, r.m, r.k, r.family))
    };
    for r in rows {
        let kq = Rational::from(r.k);
        let optimal = r.ilp_status == "optimal";
        if let (Some(c), Some(p)) = (&r.cert_total, &r.phi) {
            let certifies_family = !r.cert_name.starts_with("restricted") || r.family == "restricted";
            if certifies_family && *c > &kq * p {
                fail(r, format!("certificate {c} exceeds k·phi {}", &kq * p));
            }
        }
        if let (Some(ilp), true) = (r.ilp, optimal) {
            if let Some(p) = &r.phi {
                if Rational::from(ilp) < &kq * p {
                    fail(r, format!("ilp {ilp} below k·phi"));
                }
            }
            if let Some(size) = r.constr_size {
                if size < ilp {
                    fail(r, format!("construction {size} smaller than optimum {ilp}"));
                }
            }
        }
        let (n1, m1) = (r.n as u64 - 1, r.m as u64 - 1);
        match r.experiment.as_str() {
            "E1" => {
                let target = r.k * n1 + m1;
                if optimal && r.ilp != Some(target) {
                    fail(r, format!("ilp {:?} != k(n-1)+(m-1) = {target}", r.ilp));
                }
                if r.constr_size != Some(target) {
                    fail(r, format!("wide construction {:?} != {target}", r.constr_size));
                }
            }
            "E2" => {
                let expected_phi = Rational::from(n1) + Rational::new((m1 * m1) as i64, (n1 + m1) as i64);
                if r.phi.as_ref() != Some(&expected_phi) {
                    fail(r, format!("phi {:?} != {expected_phi}", r.phi));
                }
                let target = &kq * &expected_phi;
                if optimal && r.ilp.map(Rational::from) != Some(target.clone()) {
                    fail(r, format!("ilp {:?} != k·phi {target}", r.ilp));
                }
                if r.constr_size.map(Rational::from) != Some(target.clone()) {
                    fail(r, format!("biregular size {:?} != {target}", r.constr_size));
                }
            }
            "E3" => {
                if optimal && r.ilp.is_some_and(|v| v < r.ball_serra) {
                    fail(r, format!("ilp {:?} below Ball–Serra {}", r.ilp, r.ball_serra));
                }
            }
            "E4" => {
                if let (Some(ilp), true, Some(t)) = (r.ilp, optimal, bracket_param(&r.cert_name, "t")) {
                    let lower = r.k * (n1 + t);
                    if ilp < lower || r.constr_size.is_some_and(|s| ilp > s) {
                        fail(r, format!("sandwich {lower} <= {ilp} <= {:?} fails", r.constr_size));
                    }
                }
            }
            "E5" if r.kind == "exponential" && r.n >= 4 && bracket_param(&r.cert_name, "delta") != Some(1) => {
                fail(r, format!("exponential grid not 1-generic: {}", r.cert_name));
            }
            _ => {}
        }
    }
    // Restricted and full optima agree on every (n, k) where both finished.
    for r in rows.iter().filter(|r| r.experiment == "E4" && r.family == "full" && r.ilp_status == "optimal") {
        let twin = rows.iter().find(|s| {
            s.experiment == "E4" && s.family == "restricted" && s.n == r.n && s.k == r.k && s.ilp_status == "optimal"
        });
        if let Some(s) = twin {
            if s.ilp != r.ilp {
                failures.push(format!("E4 n={} k={}: full {:?} != restricted {:?}", r.n, r.k, r.ilp, s.ilp));
            }
        }
    }
    failures
}

/// Minimum `k`-cover size over `fam` by exhaustive search over multiplicity
/// vectors, without any linear programming. Incidences are recomputed from
/// the line equations. Returns `None` when no cover of size at most
/// `size_cap` exists.
///
/// Lines are assigned multiplicities `0..=k` in family order. A branch is cut
/// when it cannot beat the best size found, or when some point's remaining
/// lines can no longer supply its missing coverage.
pub fn oracle_exhaustive_cov(g: &Grid, fam: &LineFamily, k: u64, size_cap: u64) -> Result<Option<u64>> {
    const NODE_LIMIT: u64 = 200_000_000;
    let points = g.points();
    let incidence: Vec<Vec<usize>> =
        fam.lines().iter().map(|l| (0..points.len()).filter(|&p| l.contains_point(&points[p])).collect()).collect();
    // lines_after[i][p]: number of lines with index >= i through point p
    let nl = incidence.len();
    let mut lines_after = vec![vec![0u64; points.len()]; nl + 1];
    for i in (0..nl).rev() {
        lines_after[i] = lines_after[i + 1].clone();
        for &p in &incidence[i] {
            lines_after[i][p] += 1;
        }
    }

    struct Search<'a> {
        incidence: &'a [Vec<usize>],
        lines_after: &'a [Vec<u64>],
        k: u64,
        best: u64,
        nodes: u64,
        coverage: Vec<u64>,
    }

    impl Search<'_> {
        fn feasible_from(&self, i: usize) -> bool {
            self.coverage.iter().zip(&self.lines_after[i]).all(|(&c, &rest)| c + rest * self.k >= self.k)
        }

        fn run(&mut self, i: usize, size: u64) -> Result<()> {
            self.nodes += 1;
            if self.nodes > NODE_LIMIT {
                return Err(Error::BudgetExceeded(format!("exhaustive search passed {NODE_LIMIT} nodes")));
            }
            if size >= self.best {
                return Ok(());
            }
            if self.coverage.iter().all(|&c| c >= self.k) {
                self.best = size;
                return Ok(());
            }
            if i == self.incidence.len() || !self.feasible_from(i) {
                return Ok(());
            }
            let max_mult = self.k.min(self.best - size - 1);
            for mult in (0..=max_mult).rev() {
                for &p in &self.incidence[i] {
                    self.coverage[p] += mult;
                }
                let r = self.run(i + 1, size + mult);
                for &p in &self.incidence[i] {
                    self.coverage[p] -= mult;
                }
                r?;
            }
            Ok(())
        }
    }

    let mut s = Search {
        incidence: &incidence,
        lines_after: &lines_after,
        k,
        best: size_cap + 1,
        nodes: 0,
        coverage: vec![0; points.len()],
    };
    s.run(0, 0)?;
    Ok((s.best <= size_cap).then_some(s.best))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

/// Writes rows to `path`. CSV uses [`CSV_HEADER`] (header only for an empty
/// list); JSON is an array of row objects with the same field names.
pub fn export_results(rows: &[ResultRow], format: ExportFormat, path: &Path) -> Result<()> {
    match format {
        ExportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
            w.write_record(CSV_HEADER)?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        ExportFormat::Json => {
            let mut w = BufWriter::new(File::create(path)?);
            serde_json::to_writer_pretty(&mut w, rows)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Reads rows written by [`export_results`].
pub fn import_results(format: ExportFormat, path: &Path) -> Result<Vec<ResultRow>> {
    match format {
        ExportFormat::Csv => {
            let mut r = csv::Reader::from_path(path)?;
            r.deserialize().map(|row| row.map_err(Error::from)).collect()
        }
        ExportFormat::Json => Ok(serde_json::from_reader(File::open(path)?)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::ALL_RESTRICTED_SLOPES;
    use crate::geometry::{enumerate_lines, restricted_lines};

    #[test]
    fn oracle_small_values() {
        let g = standard_grid(2).unwrap();
        let fam = enumerate_lines(&g);
        assert_eq!(oracle_exhaustive_cov(&g, &fam, 2, 6).unwrap(), Some(3));
        assert_eq!(oracle_exhaustive_cov(&g, &fam, 1, 6).unwrap(), Some(2));
        assert_eq!(oracle_exhaustive_cov(&g, &fam, 3, 4).unwrap(), None);
        let g = standard_grid(3).unwrap();
        let fam = restricted_lines(&g, &ALL_RESTRICTED_SLOPES).unwrap();
        assert_eq!(oracle_exhaustive_cov(&g, &fam, 1, 6).unwrap(), Some(4));
    }

    #[test]
    fn suite_contents() {
        let suite = experiment_suite();
        assert_eq!(suite.iter().map(|e| e.id.as_str()).collect::<Vec<_>>(), ["E1", "E2", "E3", "E4", "E5", "E6"]);
        let e1 = &suite[0];
        assert!(e1.cells.iter().any(|c| c.grid == GridSpec::Rectangular { n: 3, m: 2 } && c.k == 2));
        let e4 = &suite[3];
        for fam in [FamilySel::Full, FamilySel::Restricted] {
            assert!(e4.cells.iter().any(|c| c.grid == GridSpec::Standard { n: 3 } && c.k == 2 && c.family == fam));
        }
        assert!(suite[4].cells.iter().any(|c| c.grid == GridSpec::Exponential { n: 6 }));
        assert_eq!(biregular_unit(4, 3), 5);
        assert_eq!(experiment_by_id("e3").unwrap().id, "E3");
    }

    #[test]
    fn wide_cell_row() {
        let e1 = experiment_by_id("E1").unwrap();
        let c = e1.cells.iter().find(|c| c.grid == GridSpec::Rectangular { n: 3, m: 2 } && c.k == 2).unwrap();
        let row = run_cell("E1", c, &e1.budget()).unwrap();
        assert_eq!((row.ilp, row.ball_serra, row.constr_size), (Some(5), 5, Some(5)));
        assert!(check_rows(std::slice::from_ref(&row)).is_empty());
    }

    #[test]
    fn generic_cell_row() {
        let e2 = experiment_by_id("E2").unwrap();
        let c = e2.cells.iter().find(|c| matches!(c.grid, GridSpec::Generic { n: 4, m: 3, .. })).unwrap();
        let row = run_cell("E2", c, &e2.budget()).unwrap();
        assert_eq!(row.k, 5);
        assert_eq!(row.ilp, Some(19));
        assert_eq!(row.constr_size, Some(19));
        assert_eq!(row.cert_total, Some(Rational::from(19)));
        assert!(check_rows(&[row]).is_empty());
    }

    #[test]
    fn checks_catch_bad_rows() {
        let e1 = experiment_by_id("E1").unwrap();
        let c = e1.cells.iter().find(|c| c.grid == GridSpec::Rectangular { n: 3, m: 2 } && c.k == 2).unwrap();
        let mut row = run_cell("E1", c, &e1.budget()).unwrap();
        row.ilp = Some(6);
        assert!(!check_rows(&[row]).is_empty());
    }

    #[test]
    fn bracket_parameters() {
        assert_eq!(bracket_param("delta_generic[delta=1]", "delta"), Some(1));
        assert_eq!(bracket_param("restricted[t=3;z=1/2]", "t"), Some(3));
        assert_eq!(bracket_param("generic", "t"), None);
    }
}
