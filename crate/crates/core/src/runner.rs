//! Report generation behind the `qball` command line.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::limitlab::{
    distance_csv, dq_square_series_check, generation_identities_check, limit_distance_table, norm_inequality_sample,
    SweepConfig, DEFAULT_QS,
};
use crate::norm::phase_grid;
use crate::permutations::Word;
use crate::polmat::{
    close_under_involution, explicit_relations_n2, generated_relations, match_relation_sets, proportional,
};
use crate::qsu::{base_rep, residual_report, su2_identities, verify_slq_relations};
use crate::repcat::{
    catalog, catalog_entry, coherent_rep, diagram_rep, fock_printed_z11, fock_reference_formulas, fock_rep, generators,
    omega0, phi_rep, pi_q_rep, relation_residuals, vacuum_residual, xi_rep, BoxDiagram, Family, Representation,
    FOCK_WORD,
};
use crate::series::dq_series_check;
use crate::state::Binding;

pub const SCHEMA: u32 = 1;
/// Truncation cap for representations on four Fock factors.
pub const FOUR_FACTOR_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CheckRelations,
    CheckSu,
    FockFormulas,
    Diagram,
    LimitSweep,
    NormInequality,
    SeriesChecks,
    CatalogDump,
    RelationMatch,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::CheckRelations,
        Command::CheckSu,
        Command::FockFormulas,
        Command::Diagram,
        Command::LimitSweep,
        Command::NormInequality,
        Command::SeriesChecks,
        Command::CatalogDump,
        Command::RelationMatch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckRelations => "check-relations",
            Command::CheckSu => "check-su",
            Command::FockFormulas => "fock-formulas",
            Command::Diagram => "diagram",
            Command::LimitSweep => "limit-sweep",
            Command::NormInequality => "norm-inequality",
            Command::SeriesChecks => "series-checks",
            Command::CatalogDump => "catalog-dump",
            Command::RelationMatch => "relation-match",
        }
    }

    fn default_tol(self) -> f64 {
        match self {
            Command::NormInequality => 1e-6,
            Command::SeriesChecks => 1e-10,
            _ => 1e-9,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub qs: Vec<f64>,
    pub grid: usize,
    pub trials: usize,
    pub tol: Option<f64>,
    pub seed: u64,
    pub cuts: Vec<usize>,
    pub samples: usize,
    pub diagram: Option<String>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n: 12,
            qs: DEFAULT_QS.to_vec(),
            grid: 8,
            trials: 3,
            tol: None,
            seed: 2024,
            cuts: vec![2, 4, 6],
            samples: 50,
            diagram: None,
            format: OutputFormat::Json,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| self.command.default_tol())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::Config(format!("N = {} must be at least 4", self.n)));
        }
        if self.grid < 4 {
            return Err(Error::Config(format!("grid = {} must be at least 4", self.grid)));
        }
        if !(self.tol() > 0.0) {
            return Err(Error::Config(format!("tolerance {} must be positive", self.tol())));
        }
        if self.format == OutputFormat::Csv && self.command != Command::LimitSweep {
            return Err(Error::Config(format!(
                "csv output is only available for limit-sweep, not {}",
                self.command
            )));
        }
        if self.command == Command::Diagram && self.diagram.is_none() {
            return Err(Error::Config("diagram needs --diagram".into()));
        }
        self.sweep().validate()
    }

    fn sweep(&self) -> SweepConfig {
        SweepConfig {
            qs: self.qs.clone(),
            n: self.n,
            grid: self.grid,
            trials: self.trials,
            tol: self.tol(),
            seed: self.seed,
            cuts: self.cuts.clone(),
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// A finished report: `body` is the text written out.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub pass: bool,
    pub body: String,
}

/// Runs one command. Configuration problems come back as `Error::Config`.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let (pass, report, csv) = match cfg.command {
        Command::CheckRelations => check_relations(cfg)?,
        Command::CheckSu => check_su(cfg)?,
        Command::FockFormulas => fock_formulas(cfg)?,
        Command::Diagram => diagram(cfg)?,
        Command::LimitSweep => limit_sweep(cfg)?,
        Command::NormInequality => norm_inequality(cfg)?,
        Command::SeriesChecks => series_checks(cfg)?,
        Command::CatalogDump => (true, serde_json::to_value(catalog(cfg.qs[0])?).map_err(json_err)?, None),
        Command::RelationMatch => relation_match()?,
    };
    let body = match (cfg.format, csv) {
        (OutputFormat::Csv, Some(csv)) => csv,
        _ => {
            let doc = json!({
                "schema": SCHEMA,
                "command": cfg.command.name(),
                "config": cfg,
                "pass": pass,
                "report": report,
            });
            let mut s = serde_json::to_string_pretty(&doc).map_err(json_err)?;
            s.push('\n');
            s
        }
    };
    Ok(RunOutput { pass, body })
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Construction(format!("json: {e}"))
}

type Outcome = (bool, Value, Option<String>);

/// The representations checked against the relations, with the truncation
/// each is evaluated at.
pub fn relation_suite(q: f64, n: usize) -> Result<Vec<(Representation, usize)>> {
    Ok(vec![
        (fock_rep()?, n.min(FOUR_FACTOR_N)),
        (omega0()?, n),
        (coherent_rep(std::f64::consts::FRAC_PI_3, q)?, n),
        (xi_rep()?, n),
        (phi_rep()?, n),
        (pi_q_rep()?, n),
    ])
}

fn check_relations(cfg: &RunConfig) -> Result<Outcome> {
    let relations = close_under_involution(&explicit_relations_n2());
    let grid = phase_grid(cfg.grid);
    let mut rng = cfg.rng();
    let mut rows = Vec::new();
    let mut pass = true;
    for &q in &cfg.qs {
        for (rep, n) in relation_suite(q, cfg.n)? {
            let entries = relation_residuals(&rep, &relations, q, n, &grid, cfg.trials, cfg.tol(), &mut rng)?;
            let worst = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
            let ok = entries.iter().all(|e| e.pass);
            pass &= ok;
            rows.push(json!({
                "representation": rep.name,
                "q": q,
                "n": n,
                "max_residual": worst,
                "pass": ok,
                "entries": entries,
            }));
        }
    }
    Ok((pass, json!({ "relations": relations.len(), "rows": rows }), None))
}

fn check_su(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = cfg.rng();
    let n4 = cfg.n.min(FOUR_FACTOR_N);
    let sigma = crate::qsu::tensor_rep(&Word::new(FOCK_WORD.to_vec()), 4)?;
    let mut reports = Vec::new();
    let mut pass = true;
    for &q in &cfg.qs {
        let su2 = residual_report(&su2_identities(), q, cfg.n, cfg.trials, cfg.tol(), &mut rng)?;
        let base = verify_slq_relations(&base_rep(), q, cfg.n, cfg.trials, cfg.tol(), &mut rng)?;
        let four = verify_slq_relations(&sigma, q, n4, cfg.trials, cfg.tol(), &mut rng)?;
        pass &= su2.pass && base.pass && four.pass;
        reports.push(json!({ "q": q, "su2_identities": su2, "su2_relations": base, "su4_sigma": four }));
    }
    Ok((pass, Value::Array(reports), None))
}

fn fock_formulas(cfg: &RunConfig) -> Result<Outcome> {
    let f = fock_rep()?;
    let q = cfg.qs[0];
    let b = Binding::new(q);
    let mut rows = Vec::new();
    let mut pass = true;
    for (g, expect) in fock_reference_formulas() {
        let got = f.image(g)?;
        let equal = got == expect;
        let vacuum = vacuum_residual(&f.image(g.adjoint())?.to_numeric(q), &b, FOUR_FACTOR_N)?;
        pass &= equal && vacuum == 0.0;
        rows.push(json!({
            "generator": g.to_string(),
            "image": got.to_string(),
            "expected": expect.to_string(),
            "equal": equal,
            "starred_vacuum_residual": vacuum,
        }));
    }
    let printed = fock_printed_z11();
    let printed_vacuum = vacuum_residual(&printed.adjoint().to_numeric(q), &b, FOUR_FACTOR_N)?;
    let report = json!({
        "word": FOCK_WORD,
        "rows": rows,
        "variant_z11": {
            "formula": printed.to_string(),
            "equal": f.image(crate::polmat::Gen::z(1, 1))? == printed,
            "starred_vacuum_residual": printed_vacuum,
        },
    });
    Ok((pass, report, None))
}

fn diagram(cfg: &RunConfig) -> Result<Outcome> {
    let name = cfg.diagram.as_deref().expect("validated");
    let d = match Family::parse(name) {
        Ok(f) => f.diagram(),
        Err(_) => BoxDiagram::parse(name)?,
    };
    let rep = diagram_rep(&d)?;
    let relations = close_under_involution(&explicit_relations_n2());
    let grid = phase_grid(cfg.grid);
    let mut rng = cfg.rng();
    let n = if rep.kinds().iter().filter(|k| **k == crate::FactorKind::Fock).count() >= 4 {
        cfg.n.min(FOUR_FACTOR_N)
    } else {
        cfg.n
    };
    let mut rows = Vec::new();
    let mut pass = true;
    for &q in &cfg.qs {
        let entries = relation_residuals(&rep, &relations, q, n, &grid, cfg.trials, cfg.tol(), &mut rng)?;
        let worst = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
        pass &= entries.iter().all(|e| e.pass);
        rows.push(json!({ "q": q, "n": n, "max_residual": worst }));
    }
    let entry = catalog_entry(&rep, Some(d), cfg.qs[0])?;
    Ok((
        pass,
        json!({ "diagram": d.to_string(), "images": entry, "residuals": rows }),
        None,
    ))
}

fn limit_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let rows = limit_distance_table(&cfg.sweep())?;
    let mut pass = rows.iter().all(|r| r.value <= 2.0 * r.q);
    for a in &rows {
        for b in &rows {
            if a.generator == b.generator && a.component == b.component && a.q < b.q && a.value > b.value + cfg.tol() {
                pass = false;
            }
        }
    }
    let csv = distance_csv(&rows)?;
    Ok((pass, serde_json::to_value(&rows).map_err(json_err)?, Some(csv)))
}

fn norm_inequality(cfg: &RunConfig) -> Result<Outcome> {
    let report = norm_inequality_sample(&cfg.sweep(), cfg.samples)?;
    let pass = report.violations == 0;
    let witnesses: Vec<_> = report.rows.iter().filter(|r| !r.pass).collect();
    let summary = json!({
        "samples": report.samples,
        "rows": report.rows.len(),
        "violations": report.violations,
        "witnesses": witnesses,
    });
    Ok((pass, summary, None))
}

fn series_checks(cfg: &RunConfig) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for &q in &cfg.qs {
        let dq = dq_series_check(q, cfg.n, cfg.n)?;
        let sq = dq_square_series_check(q, cfg.n, cfg.n)?;
        let gen = generation_identities_check(q, cfg.n, cfg.trials, cfg.tol(), cfg.seed)?;
        pass &= dq <= 1e-12 && sq.residual <= 1e-12 && sq.projector_residual <= 1e-12 && gen.pass;
        rows.push(json!({ "q": q, "dq_series": dq, "dq_square_series": sq, "generation": gen }));
    }
    Ok((pass, Value::Array(rows), None))
}

fn relation_match() -> Result<Outcome> {
    let displayed = explicit_relations_n2();
    let closed = close_under_involution(&displayed);
    let generated = generated_relations(2)?;
    let report = match_relation_sets(&generated, &closed);
    let displayed_in_generated = displayed
        .iter()
        .all(|r| generated.iter().any(|g| proportional(&g.element, &r.element)));
    let pass = report.complete && displayed_in_generated;
    let value = json!({
        "displayed": displayed.len(),
        "closed": closed.len(),
        "generated": generated.len(),
        "displayed_in_generated": displayed_in_generated,
        "matching": report,
    });
    Ok((pass, value, None))
}

/// Names of the four unstarred generators.
pub fn generator_labels() -> Vec<String> {
    generators().iter().map(|g| g.to_string()).collect()
}
