//! One function per subcommand, each producing a [`Report`]. Input problems
//! surface as [`CliError`]; failed mathematical checks are recorded in the
//! report and turn its verdict red.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use conifold::degeneration::{
    build_corrected, check_les, limiting_graded_dims, stratified_quotient, DegenerationSpec, LesWitness,
};
use conifold::monodromy::{
    check_hard_lefschetz, jordan_weight_oracle, to_rational, total_monodromy, validate_gluing, weight_filtration,
    GluingDatum, LefschetzReport, VanishingConfig,
};
use conifold::qlinalg::{is_quasi_unipotent, is_unipotent, log_unipotent, nilpotency_index};
use conifold::zigzag::{
    assemble, classify_self_dual_extensions, is_self_dual_presentation, render_compressed, validate,
    ExtensionPresentation, ZigZagData,
};
use conifold::QMatrix;

use crate::error::CliError;
use crate::input::{keys, parse, read_text};
use crate::report::{Check, Report, Table};
use crate::suite::{run_suite, Goldens};
use crate::tables::{compare_with_golden, table1, table2, TableRow, GOLDEN_TABLE1, GOLDEN_TABLE2};

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input { path: path.display().to_string(), message: e.to_string() }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report data serializes")
}

fn dims_cell(d: &std::collections::BTreeMap<i64, usize>) -> String {
    let parts: Vec<String> = d.iter().map(|(w, n)| format!("{w}: {n}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn lefschetz_check(r: &LefschetzReport) -> Check {
    let mut problems = Vec::new();
    if !r.shift_failures.is_empty() {
        problems.push(format!("N W_l ⊄ W_(l-2) for l in {:?}", r.shift_failures));
    }
    if !r.lefschetz_failures.is_empty() {
        problems.push(format!("N^j: Gr_(k+j) -> Gr_(k-j) not an isomorphism for j in {:?}", r.lefschetz_failures));
    }
    Check::new("N W_l ⊆ W_(l-2) and N^j: Gr_(k+j) ≅ Gr_(k-j)", problems.is_empty(), problems.join("; "))
}

fn zigzag_table(caption: &str, rows: &[TableRow]) -> Table {
    rows.iter().fold(Table::new(caption, &["Object", "Zig-zag", "Comments"]), |t, r| {
        t.row(vec![r.object.clone(), r.compressed.clone(), r.comment.clone()])
    })
}

pub fn tables() -> Report {
    let (t1, t2) = (table1(), table2());
    let c1 = compare_with_golden(&t1, GOLDEN_TABLE1);
    let c2 = compare_with_golden(&t2, GOLDEN_TABLE2);
    Report::new("tables", "Standard zig-zags and extension templates")
        .table(zigzag_table("Standard zig-zags at an ordinary double point", &t1))
        .table(zigzag_table("Extension templates in zig-zag form", &t2))
        .note("The split and corrected rows share one compressed shape; only the class parameter separates them.")
        .check(Check::new("table 1 matches golden file", c1.is_ok(), c1.err().unwrap_or_default()))
        .check(Check::new("table 2 matches golden file", c2.is_ok(), c2.err().unwrap_or_default()))
        .data(json!({ "table1": to_value(&t1), "table2": to_value(&t2) }))
}

pub fn check(seed: u64, golden_dir: Option<&Path>) -> Result<Report, CliError> {
    let goldens = match golden_dir {
        Some(dir) => Goldens::from_dir(dir)?,
        None => Goldens::default(),
    };
    let results = run_suite(seed, &goldens);
    let mut table = Table::new("Verification suite", &["#", "Criterion", "Verdict", "Detail"]);
    for r in &results {
        let verdict = if r.passed { "pass" } else { "FAIL" };
        table = table.row(vec![r.id.to_string(), r.name.into(), verdict.into(), r.detail.clone()]);
    }
    let mut report = Report::new("check", "Verification suite").note(format!("seed {seed}")).table(table);
    for r in &results {
        report = report.check(Check::new(format!("{}. {}", r.id, r.name), r.passed, r.detail.clone()));
    }
    Ok(report.data(to_value(&results)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsInput {
    #[serde(alias = "operator")]
    n: QMatrix,
    #[serde(default)]
    center: Option<i64>,
}

/// Accepts a bare matrix or `{"n": matrix, "center": k}`.
pub fn weights(path: &Path, center: Option<i64>) -> Result<Report, CliError> {
    let origin = path.display().to_string();
    let text = read_text(path)?;
    let input = if text.trim_start().starts_with('[') {
        WeightsInput { n: parse(&origin, &text)?, center: None }
    } else {
        parse(&origin, &text)?
    };
    let k = center.or(input.center).unwrap_or(0);
    let n = input.n;
    let w = weight_filtration(&n, k).map_err(|e| input_error(path, e))?;
    let oracle = jordan_weight_oracle(&n, k).map_err(|e| input_error(path, e))?;
    let lefschetz = check_hard_lefschetz(&w).map_err(|e| input_error(path, e))?;
    let graded = w.graded_dims();
    let table = graded.iter().fold(Table::new("Graded pieces", &["Weight", "dim Gr"]), |t, (l, d)| {
        t.row(vec![l.to_string(), d.to_string()])
    });
    Ok(Report::new("weights", format!("Weight filtration of N centered at {k}"))
        .note(format!("N has rank {}; graded dimensions {}", n.rank(), dims_cell(&graded)))
        .table(table)
        .check(lefschetz_check(&lefschetz))
        .check(Check::new("agrees with the Jordan-form oracle", w == oracle, ""))
        .data(to_value(&w)))
}

/// Accepts a vanishing configuration or a degeneration specification with
/// a lattice.
pub fn monodromy(path: &Path, center: Option<i64>, power: Option<u32>) -> Result<Report, CliError> {
    let origin = path.display().to_string();
    let text = read_text(path)?;
    let (cfg, default_center): (VanishingConfig, i64) = if keys(&origin, &text)?.iter().any(|k| k == "fiber_dim") {
        let spec: DegenerationSpec = parse(&origin, &text)?;
        let cfg = spec.lattice_config().cloned().ok_or_else(|| input_error(path, "specification has no lattice"))?;
        (cfg, spec.fiber_dim())
    } else {
        (parse(&origin, &text)?, 3)
    };
    let k = center.unwrap_or(default_center);
    let m = power.unwrap_or(1).max(1);
    let t = to_rational(&total_monodromy(&cfg).map_err(|e| input_error(path, e))?);
    let tm = t.pow(m).map_err(|e| input_error(path, e))?;
    let qu = is_quasi_unipotent(&t).map_err(|e| input_error(path, e))?;

    let mut report = Report::new("monodromy", "Total monodromy")
        .note(match cfg.cycle_count() {
            1 => format!("T = T_1 (one cycle, lattice rank {})", cfg.lattice().rank()),
            r => {
                format!("T = T_{r} ∘ ... ∘ T_1 in cycle-list order ({r} cycles, lattice rank {})", cfg.lattice().rank())
            }
        })
        .note(format!("T = {t}"));
    report = report.check(Check::new(
        "T is quasi-unipotent",
        qu.quasi_unipotent,
        match qu.order {
            Some(o) => format!("T^{o} is unipotent"),
            None => "an eigenvalue is not a root of unity".into(),
        },
    ));
    let mut data = json!({ "monodromy": to_value(&t), "power": m, "quasi_unipotent_order": qu.order });
    if !is_unipotent(&tm).map_err(|e| input_error(path, e))? {
        let hint = qu.order.map(|o| format!("; rerun with --power {o}")).unwrap_or_default();
        return Ok(report
            .check(Check::new(format!("T^{m} is unipotent"), false, format!("not unipotent{hint}")))
            .data(data));
    }
    let n = log_unipotent(&tm).map_err(|e| input_error(path, e))?;
    let w = weight_filtration(&n, k).map_err(|e| input_error(path, e))?;
    let lefschetz = check_hard_lefschetz(&w).map_err(|e| input_error(path, e))?;
    let graded = w.graded_dims();
    report = report
        .check(Check::new(format!("T^{m} is unipotent"), true, ""))
        .note(format!("N = log T^{m} = {n}"))
        .note(format!(
            "rank N = {}, nilpotency index {}, graded dimensions at center {k}: {}",
            n.rank(),
            nilpotency_index(&n).ok().flatten().unwrap_or(0),
            dims_cell(&graded)
        ))
        .check(lefschetz_check(&lefschetz));
    data["log"] = to_value(&n);
    data["weight_filtration"] = to_value(&w);
    Ok(report.data(data))
}

pub fn classify(r: usize) -> Result<Report, CliError> {
    let rep = classify_self_dual_extensions(r).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut table = Table::new(
        format!("Extension classes of the IC object by {r} skyscraper(s), up to node scaling"),
        &["Orbit", "Support", "Representative", "Self-dual", "Nontrivial at every node"],
    );
    for (i, o) in rep.orbits.iter().enumerate() {
        let params: Vec<String> = o.representative.iter().map(|q| q.to_string()).collect();
        let marker = if i == rep.corrected_orbit { " (corrected)" } else { "" };
        table = table.row(vec![
            format!("{}{marker}", i + 1),
            format!("{:?}", o.support),
            format!("({})", params.join(", ")),
            o.self_dual.to_string(),
            o.nontrivial_at_every_node.to_string(),
        ]);
    }
    Ok(Report::new("classify", format!("Classification for r = {r}"))
        .table(table)
        .check(Check::new(
            format!("{} orbits", 1usize << r),
            rep.orbits.len() == 1 << r,
            format!("found {}", rep.orbits.len()),
        ))
        .check(Check::new("orbits pairwise non-isomorphic", rep.orbits_distinct, ""))
        .check(Check::new("exactly one orbit nontrivial at every node", rep.unique_full_support, ""))
        .check(Check::new("corrected orbit is self-dual", rep.corrected().self_dual, ""))
        .check(Check::new(
            "scaled samples normalize into their orbits",
            rep.orbits.iter().all(|o| o.scaling_verified),
            "",
        ))
        .data(to_value(&rep)))
}

pub fn les(path: &Path) -> Result<Report, CliError> {
    let w: LesWitness = parse(&path.display().to_string(), &read_text(path)?)?;
    let rep = check_les(&w).map_err(|e| input_error(path, e))?;
    let mut table = Table::new(
        "Long exact sequence S -> Psi -> Phi -> S[1]",
        &["m", "dim S", "dim Psi", "dim Phi", "rk S->Psi", "rk Psi->Phi", "rk Phi->S[1]"],
    );
    for i in 0..w.len() {
        table = table.row(vec![
            (w.start + i as i64).to_string(),
            w.h_special[i].to_string(),
            w.h_psi[i].to_string(),
            w.h_phi[i].to_string(),
            w.r_special_psi[i].to_string(),
            w.r_psi_phi[i].to_string(),
            rep.connecting_ranks.get(i).map(|r| r.to_string()).unwrap_or_else(|| "-".into()),
        ]);
    }
    let failure = rep.first_failure.as_ref().map(|f| {
        format!(
            "exactness fails at {} in degree {} (dim {}, ranks {} in / {} out)",
            f.term, f.degree, f.dim, f.rank_in, f.rank_out
        )
    });
    Ok(Report::new("les", "Long exact sequence bookkeeping")
        .table(table)
        .check(Check::new("exact at every term", rep.exact, failure.unwrap_or_default()))
        .check(Check::new(
            "alternating sum vanishes",
            rep.alternating_sum == 0,
            format!("sum = {}", rep.alternating_sum),
        ))
        .data(to_value(&rep)))
}

/// Dispatches on the top-level keys: a tuple (`hm`), a presentation
/// (`sub`), a gluing datum (`mprime_dim`) or a degeneration (`fiber_dim`).
pub fn validate_input(path: &Path) -> Result<Report, CliError> {
    let origin = path.display().to_string();
    let text = read_text(path)?;
    let ks = keys(&origin, &text)?;
    let has = |k: &str| ks.iter().any(|x| x == k);
    if has("hm") {
        validate_tuple(path, parse(&origin, &text)?)
    } else if has("sub") {
        validate_presentation(path, parse(&origin, &text)?)
    } else if has("mprime_dim") {
        validate_gluing_datum(path, parse(&origin, &text)?)
    } else if has("fiber_dim") {
        validate_spec(path, parse(&origin, &text)?)
    } else {
        Err(input_error(path, "unrecognized input: expected a tuple, presentation, gluing datum or degeneration"))
    }
}

fn validate_tuple(path: &Path, data: ZigZagData) -> Result<Report, CliError> {
    let v = validate(&data).map_err(|e| input_error(path, e))?;
    Ok(Report::new("validate", format!("Zig-zag tuple {}", render_compressed(&data)))
        .check(Check::new(
            "A->B: beta alpha = 0",
            v.beta_alpha_zero,
            if v.beta_alpha_zero { "" } else { "composite A->B nonzero" },
        ))
        .check(Check::new(
            "B->H0: gamma beta = 0",
            v.gamma_beta_zero,
            if v.gamma_beta_zero { "" } else { "composite B->H0 nonzero" },
        ))
        .check(Check::new("exact at A", v.exact_at_a, ""))
        .check(Check::new("exact at B", v.exact_at_b, ""))
        .data(json!({ "failures": v.failures(), "valid": v.is_valid() })))
}

fn validate_presentation(path: &Path, e: ExtensionPresentation) -> Result<Report, CliError> {
    let assembly = assemble(&e).map_err(|err| input_error(path, err))?;
    let self_dual = is_self_dual_presentation(&e).map_err(|err| input_error(path, err))?;
    Ok(Report::new("validate", "Extension presentation")
        .note(format!("assembled tuple {}", render_compressed(&assembly.data)))
        .note(format!("self-dual: {self_dual}; split: {}", e.is_split()))
        .check(Check::new(
            "assembled tuple is valid",
            assembly.report.is_valid(),
            assembly.report.failures().join(", "),
        ))
        .data(json!({ "assembled": to_value(&assembly.data), "self_dual": self_dual, "split": e.is_split() })))
}

fn validate_gluing_datum(path: &Path, g: GluingDatum) -> Result<Report, CliError> {
    let ok = validate_gluing(&g).map_err(|e| input_error(path, e))?;
    Ok(Report::new("validate", "Gluing datum")
        .check(Check::new("vu = N", ok, if ok { "" } else { "vu differs from N" }))
        .data(json!({ "valid": ok })))
}

fn validate_spec(path: &Path, spec: DegenerationSpec) -> Result<Report, CliError> {
    let quotient = stratified_quotient(&spec).map_err(|e| input_error(path, e))?;
    let mut report =
        Report::new("validate", "Degeneration").note(format!("point-supported quotient {}", quotient.quotient));
    let mut data = json!({ "quotient": to_value(&quotient) });
    if spec.strata().iter().all(|s| s.milnor_rank == 1) {
        let seq = build_corrected(&spec).map_err(|e| input_error(path, e))?;
        report = report
            .note(format!("pointwise defect {}", seq.pointwise_defect))
            .check(Check::new("slotwise dimensions additive", seq.additive, ""))
            .check(Check::new("quotient is the skyscraper sum", seq.quotient_is_skyscraper_sum, ""))
            .check(Check::new("short exact sequence of tuples", seq.verdict, ""));
        data["exact_sequence"] = to_value(&seq);
    }
    if spec.lattice_config().is_some() {
        match limiting_graded_dims(&spec, None) {
            Ok(lim) => {
                report = report
                    .note(format!("rank N = {}, graded dimensions {}", lim.rank_n, dims_cell(&lim.graded_dims)))
                    .check(Check::new("limiting weight data", lim.passes(), ""));
                data["limiting"] = to_value(&lim);
            }
            Err(e) => report = report.check(Check::new("limiting weight data", false, e.to_string())),
        }
    }
    Ok(report.data(data))
}
