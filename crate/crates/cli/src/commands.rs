//! One function per subcommand. Each returns the JSON report together with
//! a short human-readable rendering.

use std::fmt::Write as _;

use equilat::bases::{
    gl_element, graver_basis, groebner_basis, hilbert_basis, hilbert_graver_crosscheck,
    sl_element, thm_graver_envelope_check, verify_groebner, verify_markov, Verification,
};
use equilat::chains::{stabilization_scan, ScanKind, ScanOutcome};
use equilat::intlinalg::IntMatrix;
use equilat::models::{kernel_lattice, marginal_matrix, no3way_witness, scenario_kernel, scenario_shape};
use equilat::symmetry::{canonical_form, is_sym_invariant, orbit};
use equilat::{BasisReport, Budget, Error, IndexedVector, LatticeHandle, Result, TermOrder};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{self, ModelInput};
use crate::Args;

pub struct Output {
    pub json: Value,
    pub text: String,
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn need<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| Error::InvalidInput(format!("missing required option --{flag}")))
}

fn list(out: &mut String, title: &str, vectors: &[IndexedVector]) {
    let _ = writeln!(out, "{title} ({}):", vectors.len());
    for v in vectors {
        let _ = writeln!(out, "  {v}");
    }
}

fn lattice(args: &Args, budget: &Budget) -> Result<LatticeHandle> {
    input::lattice(input::read_json(need(&args.input, "in")?)?, budget)
}

fn basis_output(report: BasisReport) -> Result<Output> {
    let mut text = format!("kind: {}\n", to_value(&report.kind)?.as_str().unwrap_or_default());
    if let Some(order) = report.order {
        let _ = writeln!(text, "order: {order}");
    }
    list(&mut text, "elements", &report.elements);
    if let Some(reps) = &report.representatives {
        list(&mut text, "orbit representatives", reps);
    }
    Ok(Output { json: to_value(&report)?, text })
}

/// Adds orbit representatives when the lattice is `Sym(n)`-invariant.
fn with_orbits(report: BasisReport, lattice: &LatticeHandle, budget: &Budget) -> Result<BasisReport> {
    if is_sym_invariant(lattice)? {
        report.with_representatives(budget)
    } else {
        Ok(report)
    }
}

pub fn graver(args: &Args, budget: &Budget) -> Result<Output> {
    let l = lattice(args, budget)?;
    basis_output(with_orbits(graver_basis(&l, budget)?, &l, budget)?)
}

pub fn hilbert(args: &Args, budget: &Budget) -> Result<Output> {
    let l = lattice(args, budget)?;
    basis_output(with_orbits(hilbert_basis(&l, budget)?, &l, budget)?)
}

pub fn groebner(args: &Args, budget: &Budget) -> Result<Output> {
    let l = lattice(args, budget)?;
    basis_output(groebner_basis(&l, args.order.unwrap_or(TermOrder::Lex), budget)?)
}

fn verification_output(v: Verification) -> Result<Output> {
    let mut text = format!("result: {}\nverified up to norm: {}\nfibers checked: {}\n", v.result, v.verified_up_to, v.fibers_checked);
    if let Some(w) = &v.witness {
        let _ = writeln!(text, "failing fiber root: {w}");
    }
    Ok(Output { json: to_value(&v)?, text })
}

fn moves(args: &Args) -> Result<Vec<IndexedVector>> {
    input::vectors(input::read_json(need(&args.basis, "basis")?)?)
}

pub fn markov_verify(args: &Args, budget: &Budget) -> Result<Output> {
    let l = lattice(args, budget)?;
    verification_output(verify_markov(&l, &moves(args)?, *need(&args.bound, "bound")?, budget)?)
}

pub fn groebner_verify(args: &Args, budget: &Budget) -> Result<Output> {
    let l = lattice(args, budget)?;
    let order = args.order.unwrap_or(TermOrder::Lex);
    verification_output(verify_groebner(&l, &moves(args)?, order, *need(&args.bound, "bound")?, budget)?)
}

fn level_of(args: &Args, u: &IndexedVector) -> u32 {
    args.n.unwrap_or(u.shape().n())
}

pub fn orbit_cmd(args: &Args, budget: &Budget) -> Result<Output> {
    let u = input::vector(input::read_json(need(&args.input, "in")?)?)?;
    let o = orbit(&u, level_of(args, &u), budget.orbit)?;
    let mut text = String::new();
    list(&mut text, "orbit", &o);
    Ok(Output { json: json!({ "size": o.len(), "orbit": to_value(&o)? }), text })
}

pub fn canon(args: &Args, budget: &Budget) -> Result<Output> {
    let u = input::vector(input::read_json(need(&args.input, "in")?)?)?;
    let c = canonical_form(&u, level_of(args, &u), budget.orbit)?;
    Ok(Output { text: format!("{c}\n"), json: to_value(&c)? })
}

pub fn lift_check(args: &Args, budget: &Budget) -> Result<Output> {
    let l = lattice(args, budget)?;
    let result = hilbert_graver_crosscheck(&l, budget)?;
    Ok(Output { json: json!({ "result": result }), text: format!("result: {result}\n") })
}

pub fn envelope_check(args: &Args, budget: &Budget) -> Result<Output> {
    let l = lattice(args, budget)?;
    let result = thm_graver_envelope_check(&l, budget)?;
    let g = gl_element(&l)?;
    let s = sl_element(&l)?;
    let show = |v: &Option<IndexedVector>| v.as_ref().map_or("none".to_string(), |v| v.to_string());
    let text = format!("result: {result}\ng_L element: {}\ns_L element: {}\n", show(&g), show(&s));
    Ok(Output { json: json!({ "result": result, "gl_element": to_value(&g)?, "sl_element": to_value(&s)? }), text })
}

fn scan_text(outcome: &ScanOutcome) -> String {
    let mut text = format!("kind: {}\nwindow: {}\n", outcome.kind, outcome.window);
    for level in &outcome.levels {
        let _ = writeln!(
            text,
            "level {}: rank {}, {} elements, {} orbit representatives, support <= {}",
            level.n,
            level.rank,
            level.basis_size,
            level.representatives.len(),
            level.support_bound
        );
    }
    match &outcome.witness {
        Some(w) => {
            let _ = writeln!(text, "witness at level {} (confirmed through {}): {}", w.level, w.confirmed_through, w.note);
            list(&mut text, "representatives", &w.representatives);
        }
        None => text.push_str("no witness\n"),
    }
    if let Some(f) = &outcome.failure {
        let _ = writeln!(text, "stopped at level {}: {}", f.level, f.message);
    }
    text
}

/// Returns the report and, when the scan was cut short, the reason that
/// decides the exit status.
pub fn stabilize(args: &Args, budget: &Budget) -> Result<(Output, Option<String>)> {
    let path = args.seed.as_ref().or(args.input.as_ref()).ok_or_else(|| Error::InvalidInput("missing required option --seed".into()))?;
    let spec = input::chain(input::read_json(path)?)?;
    let kind: ScanKind = *need(&args.kind, "kind")?;
    let outcome = stabilization_scan(&spec, kind, *need(&args.n_max, "n-max")?, args.window, budget)?;
    let cut = outcome.failure.as_ref().map(|f| f.reason.clone());
    Ok((Output { text: scan_text(&outcome), json: to_value(&outcome)? }, cut))
}

fn matrix_summary(m: &IntMatrix) -> Value {
    json!({ "rows": m.rows(), "cols": m.cols(), "rank": m.rank() })
}

pub fn model_kernel(args: &Args, budget: &Budget) -> Result<Output> {
    let mut value = input::read_json(need(&args.input, "in")?)?;
    let level = value.as_object_mut().and_then(|m| m.remove("n")).and_then(|n| n.as_u64()).map(|n| n as u32);
    let (matrix, lattice, extra) = match input::model(value)? {
        ModelInput::Model(m) => (marginal_matrix(&m, budget)?, kernel_lattice(&m, budget)?, json!({})),
        ModelInput::Scenario(s) => {
            let n = *need(&args.n.or(level), "n")?;
            let (shape, _) = scenario_shape(&s, n)?;
            (marginal_matrix(&s.model(n)?, budget)?, scenario_kernel(&s, n, budget)?, json!({ "shape": to_value(&shape)? }))
        }
    };
    let mut text = format!(
        "marginal matrix: {} x {}, rank {}\nkernel rank: {}\n",
        matrix.rows(),
        matrix.cols(),
        matrix.rank(),
        lattice.rank()
    );
    list(&mut text, "kernel basis", &lattice.basis_vectors());
    let mut json = json!({ "marginal": matrix_summary(&matrix), "kernel_rank": lattice.rank(), "kernel": to_value(&lattice)? });
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    Ok(Output { json, text })
}

pub fn no3way(args: &Args, budget: &Budget) -> Result<Output> {
    let n = *need(&args.n, "n")?;
    let c = args.c.unwrap_or(2);
    let u = no3way_witness(n, c, budget)?;
    let text = format!("{u}\nsupport size: {}\n", u.support_size());
    Ok(Output { json: json!({ "n": n, "c": c, "support_size": u.support_size(), "witness": to_value(&u)? }), text })
}
