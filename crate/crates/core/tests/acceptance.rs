//! Acceptance run at the default scale: one line per criterion.
//!
//! Criteria 3 and 8 cannot be met as stated. They are printed as FAIL and
//! the run then checks the recorded explanation for each; the process exits
//! nonzero on any other failure or if an explanation stops holding.

use std::f64::consts::FRAC_PI_3;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex;
use num_traits::One;
use qball::limitlab::{
    coherent_equivalence_sample, dq_square_series_check, generation_identities_check, limit_distance_table,
    norm_inequality_for, norm_inequality_sample, SweepConfig, DEFAULT_QS,
};
use qball::norm::{essential_norm_estimate, phase_grid};
use qball::permutations::Word;
use qball::polmat::{
    close_under_involution, element_x, explicit_relations_n2, generated_relations, match_relation_sets, proportional,
    random_element, Gen,
};
use qball::qsu::{residual_report, su2_identities, tensor_rep, verify_slq_relations};
use qball::repcat::{
    coherent_rep, fock_printed_z11, fock_reference_formulas, fock_rep, generators, omega0, pi_q_rep,
    relation_residuals, vacuum_residual, FOCK_WORD,
};
use qball::runner::{relation_suite, run, Command, OutputFormat, RunConfig, FOUR_FACTOR_N};
use qball::series::dq_series_check;
use qball::state::{apply, dims_for, max_residual};
use qball::{Atom, Binding, ExactExpr, FactorKind, Laurent, Result, State};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 12;
const GRID: usize = 8;
const TRIALS: usize = 3;
const SEED: u64 = 2024;

enum Verdict {
    Pass,
    Fail,
    /// Fails as stated; `explained` records whether the recorded analysis
    /// was confirmed in this run.
    Known {
        explained: bool,
    },
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome {
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        detail,
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn sweep(qs: &[f64]) -> SweepConfig {
    SweepConfig {
        qs: qs.to_vec(),
        n: N,
        grid: GRID,
        trials: TRIALS,
        tol: 1e-6,
        seed: SEED,
        cuts: vec![2, 4, 6],
    }
}

fn relation_suite_check() -> Result<Outcome> {
    let displayed = explicit_relations_n2();
    let closed = close_under_involution(&displayed);
    let grid = phase_grid(GRID);
    let mut rng = rng();
    let mut worst: f64 = 0.0;
    let mut failing = Vec::new();
    let mut reps = 0;
    for &q in &DEFAULT_QS {
        for (rep, n) in relation_suite(q, N)? {
            reps += 1;
            for e in relation_residuals(&rep, &closed, q, n, &grid, TRIALS, 1e-9, &mut rng)? {
                worst = worst.max(e.residual);
                if !e.pass {
                    failing.push(format!("{}@{q}:{}", rep.name, e.label));
                }
            }
        }
    }
    Ok(outcome(
        failing.is_empty(),
        format!(
            "{} displayed relations closed to {}, {reps} representation/q pairs, max residual {worst:.1e}{}",
            displayed.len(),
            closed.len(),
            fmt_list(&failing)
        ),
    ))
}

fn r_matrix_check() -> Result<Outcome> {
    let displayed = explicit_relations_n2();
    let closed = close_under_involution(&displayed);
    let generated = generated_relations(2)?;
    let report = match_relation_sets(&generated, &closed);
    let covered = displayed
        .iter()
        .all(|r| generated.iter().any(|g| proportional(&g.element, &r.element)));
    Ok(outcome(
        report.complete && covered,
        format!(
            "generated {} vs closed list {}: matched {}, unmatched {}+{}, displayed all generated: {covered}",
            generated.len(),
            closed.len(),
            report.matched.len(),
            report.unmatched_left.len(),
            report.unmatched_right.len()
        ),
    ))
}

fn fock_check() -> Result<Outcome> {
    let f = fock_rep()?;
    let q = 0.5;
    let b = Binding::new(q);
    let z11 = Gen::z(1, 1);
    let printed = fock_printed_z11();
    let mut verbatim = 0;
    let mut corrected_ok = true;
    for (g, expect) in fock_reference_formulas() {
        let equal = f.image(g)? == expect;
        if g == z11 {
            corrected_ok &= equal;
        } else if equal {
            verbatim += 1;
        }
    }
    let mut vacuum: f64 = 0.0;
    for g in generators() {
        vacuum = vacuum.max(vacuum_residual(
            &f.image(g.adjoint())?.to_numeric(q),
            &b,
            FOUR_FACTOR_N,
        )?);
    }
    let printed_equal = f.image(z11)? == printed;
    let printed_vacuum = vacuum_residual(&printed.adjoint().to_numeric(q), &b, FOUR_FACTOR_N)?;
    let detail = format!(
        "{verbatim}/3 printed formulas verbatim; z_1^1 printed form equal: {printed_equal}; starred vacuum residual {vacuum:e}; printed z_1^1* on vacuum {printed_vacuum:.3}"
    );
    if verbatim == 3 && printed_equal && vacuum == 0.0 {
        return Ok(outcome(true, detail));
    }
    // the printed z_1^1 (S*C_q in the second factor) cannot annihilate the vacuum
    let explained = verbatim == 3 && corrected_ok && vacuum == 0.0 && printed_vacuum > 0.1;
    Ok(Outcome {
        verdict: Verdict::Known { explained },
        detail: format!("{detail}; computed z_1^1 has C_qS in the second factor"),
    })
}

fn su_check() -> Result<Outcome> {
    let mut rng = rng();
    let sigma = tensor_rep(&Word::new(FOCK_WORD.to_vec()), 4)?;
    let mut su2_worst: f64 = 0.0;
    let mut qdet_worst: f64 = 0.0;
    let mut slq_worst: f64 = 0.0;
    let mut pass = true;
    for &q in &DEFAULT_QS {
        let su2 = residual_report(&su2_identities(), q, N, TRIALS, 1e-10, &mut rng)?;
        pass &= su2.pass;
        su2_worst = su2.entries.iter().map(|e| e.residual).fold(su2_worst, f64::max);
        let four = verify_slq_relations(&sigma, q, FOUR_FACTOR_N, TRIALS, 1e-9, &mut rng)?;
        pass &= four.pass;
        for e in &four.entries {
            if e.label.starts_with("det_q") {
                qdet_worst = qdet_worst.max(e.residual);
            } else {
                slq_worst = slq_worst.max(e.residual);
            }
        }
    }
    Ok(outcome(
        pass,
        format!("su2 identities {su2_worst:.1e}; sigma qdet - I {qdet_worst:.1e}, other SL_4 relations {slq_worst:.1e} at N={FOUR_FACTOR_N}"),
    ))
}

fn dq_powers(kinds: &[FactorKind], powers: &[usize]) -> Result<ExactExpr> {
    let legs: Vec<Vec<Atom>> = powers.iter().map(|&p| vec![Atom::Dq; p]).collect();
    let refs: Vec<&[Atom]> = legs.iter().map(Vec::as_slice).collect();
    ExactExpr::with_kinds(kinds, &refs, Laurent::one())
}

fn coherent_check() -> Result<Outcome> {
    let mut rng = rng();
    let grid = phase_grid(GRID);
    let mut eigen: f64 = 0.0;
    let mut omega_x: f64 = 0.0;
    let mut pi_x: f64 = 0.0;
    let x = element_x();
    let o = omega0()?;
    let p = pi_q_rep()?;
    let ox = o.evaluate(&x)?.try_sub(&dq_powers(o.kinds(), &[2, 4, 2])?)?;
    let px = p.evaluate(&x)?.try_sub(&dq_powers(p.kinds(), &[0, 2, 4, 2])?)?;
    for &q in &DEFAULT_QS {
        let r = coherent_rep(FRAC_PI_3, q)?;
        let b = &r.bindings(q, &[])[0];
        let vac = State::vacuum(dims_for(r.kinds(), N));
        let out = apply(&r.image(Gen::z(1, 1))?.to_numeric(q), b, &vac)?;
        eigen = eigen.max(out.sub(&vac.scaled(Complex::from_polar(1.0, FRAC_PI_3))).norm());
        omega_x = omega_x.max(max_residual(&ox.to_numeric(q), &Binding::new(q), N, TRIALS, &mut rng)?);
        for b in p.bindings(q, &grid) {
            pi_x = pi_x.max(max_residual(&px.to_numeric(q), &b, N, TRIALS, &mut rng)?);
        }
    }
    Ok(outcome(
        eigen <= 1e-12 && omega_x <= 1e-12 && pi_x <= 1e-12,
        format!("vacuum eigenvalue error {eigen:.1e}; Omega_0(x) {omega_x:.1e}; Pi_q(x) {pi_x:.1e}"),
    ))
}

fn series_check() -> Result<Outcome> {
    let mut dq: f64 = 0.0;
    let mut sq: f64 = 0.0;
    let mut gen_pass = true;
    let mut gen_worst: f64 = 0.0;
    for &q in &DEFAULT_QS {
        dq = dq.max(dq_series_check(q, N, N)?);
        let s = dq_square_series_check(q, N, N)?;
        sq = sq.max(s.residual).max(s.projector_residual);
        let g = generation_identities_check(q, N, TRIALS, 1e-10, SEED)?;
        gen_pass &= g.pass;
        gen_worst = gen_worst.max(g.left_inverse_residual).max(g.c_squared_residual);
    }
    Ok(outcome(
        dq <= 1e-12 && sq <= 1e-12 && gen_pass,
        format!("d_q series {dq:.1e}; square series {sq:.1e}; generation identities {gen_worst:.1e}"),
    ))
}

fn limit_check() -> Result<Outcome> {
    let mut qs = vec![0.1];
    qs.extend_from_slice(&DEFAULT_QS);
    let rows = limit_distance_table(&sweep(&qs))?;
    let mut bad = Vec::new();
    for a in &rows {
        if a.value > 2.0 * a.q {
            bad.push(format!("{}:{}@{} above 2q", a.generator, a.component, a.q));
        }
        if a.q == 0.1 && a.value > 0.15 {
            bad.push(format!("{}:{}@0.1 above 0.15", a.generator, a.component));
        }
        for b in &rows {
            if a.generator == b.generator && a.component == b.component && a.q < b.q && a.value > b.value + 1e-9 {
                bad.push(format!(
                    "{}:{} not monotone at {}->{}",
                    a.generator, a.component, a.q, b.q
                ));
            }
        }
    }
    let at_small = rows.iter().filter(|r| r.q == 0.1).map(|r| r.value).fold(0.0, f64::max);
    Ok(outcome(
        bad.is_empty(),
        format!(
            "{} rows over q in {qs:?}; max distance at q=0.1 is {at_small:.4}{}",
            rows.len(),
            fmt_list(&bad)
        ),
    ))
}

fn norm_inequality_check() -> Result<Outcome> {
    let cfg = sweep(&DEFAULT_QS);
    let report = norm_inequality_sample(&cfg, 50)?;
    let detail = format!("{} violations in {} rows", report.violations, report.rows.len());
    let Some(worst) = report
        .rows
        .iter()
        .filter(|r| !r.pass)
        .max_by(|a, b| (a.estimate - a.bound).total_cmp(&(b.estimate - b.bound)))
    else {
        return Ok(outcome(true, detail));
    };
    // the excess over the bound must shrink with the truncation
    let gap12 = worst.estimate - worst.bound;
    let element = random_element(&mut cfg.rng(worst.sample as u64), 2, 3, 3);
    let finer = SweepConfig {
        qs: vec![worst.q],
        n: 18,
        cuts: vec![worst.cut],
        ..cfg.clone()
    };
    let row = &norm_inequality_for(&finer, std::slice::from_ref(&element))?.rows[0];
    let gap18 = row.estimate - row.bound;
    // and the cut compression keeps a residue of order q^cut: x maps to a
    // compact operator on the boundary yet its estimate is about q^(2 cut)
    let q = 0.9;
    let xq = omega0()?.evaluate(&element_x())?.to_numeric(q);
    let residue = essential_norm_estimate(&xq, &Binding::new(q), N, 6)?;
    let explained = gap18 < gap12 && residue > 0.1;
    Ok(Outcome {
        verdict: Verdict::Known { explained },
        detail: format!(
            "{detail}; worst sample {} q={} cut {}: excess {gap12:.2e} at N={N}, {gap18:.2e} at N=18; x at q=0.9 cut 6 estimates {residue:.3} against 0",
            worst.sample, worst.q, worst.cut
        ),
    })
}

fn equivalence_check() -> Result<Outcome> {
    let rows = coherent_equivalence_sample(&sweep(&DEFAULT_QS), FRAC_PI_3, 25)?;
    let worst = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    let converged = rows.iter().all(|r| r.converged);
    Ok(outcome(
        worst <= 1e-6 && converged,
        format!(
            "{} element/q pairs, max norm gap {worst:.1e}, all converged: {converged}",
            rows.len()
        ),
    ))
}

fn determinism_check() -> Result<Outcome> {
    let mut configs = Vec::new();
    for command in [
        Command::CheckSu,
        Command::FockFormulas,
        Command::SeriesChecks,
        Command::CatalogDump,
        Command::RelationMatch,
        Command::LimitSweep,
    ] {
        configs.push(RunConfig::new(command));
    }
    let mut csv = RunConfig::new(Command::LimitSweep);
    csv.format = OutputFormat::Csv;
    configs.push(csv);
    let mut diagram = RunConfig::new(Command::Diagram);
    diagram.diagram = Some("Qc".into());
    configs.push(diagram);
    let mut ineq = RunConfig::new(Command::NormInequality);
    ineq.samples = 3;
    configs.push(ineq);
    let mut differing = Vec::new();
    for cfg in &configs {
        let a = run(cfg)?.body;
        let b = run(cfg)?.body;
        if a != b {
            differing.push(format!("{}", cfg.command));
        }
    }
    Ok(outcome(
        differing.is_empty(),
        format!(
            "{} reports compared byte for byte{}",
            configs.len(),
            fmt_list(&differing)
        ),
    ))
}

fn fmt_list(items: &[String]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        let shown: Vec<&str> = items.iter().take(5).map(String::as_str).collect();
        format!("; failing: {}", shown.join(", "))
    }
}

type Check = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("relation suite", relation_suite_check),
        ("R-matrix consistency", r_matrix_check),
        ("Fock regression", fock_check),
        ("SU_2/SU_4 suite", su_check),
        ("coherent checks", coherent_check),
        ("series identities", series_check),
        ("limit sweep", limit_check),
        ("norm inequality", norm_inequality_check),
        ("unitary equivalence", equivalence_check),
        ("determinism", determinism_check),
    ];
    let start = Instant::now();
    let mut passed = 0;
    let mut unexpected = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (status, detail) = match check() {
            Ok(Outcome {
                verdict: Verdict::Pass,
                detail,
            }) => {
                passed += 1;
                ("PASS", detail)
            }
            Ok(Outcome {
                verdict: Verdict::Fail,
                detail,
            }) => {
                unexpected += 1;
                ("FAIL", detail)
            }
            Ok(Outcome {
                verdict: Verdict::Known { explained },
                detail,
            }) => {
                if explained {
                    ("FAIL", format!("{detail} [known gap, analysis confirmed]"))
                } else {
                    unexpected += 1;
                    ("FAIL", format!("{detail} [known gap, analysis NOT confirmed]"))
                }
            }
            Err(e) => {
                unexpected += 1;
                ("FAIL", format!("error: {e}"))
            }
        };
        println!(
            "criterion {:>2} {:<22} {status} ({:.1}s) {detail}",
            k + 1,
            name,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {passed}/{} pass, {} unexpected failures, {:.1}s",
        criteria.len(),
        unexpected,
        start.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
