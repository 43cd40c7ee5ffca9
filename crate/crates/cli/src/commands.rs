use std::fmt::Write;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use serde_json::json;

use dflow_core::flowcat::hom_poset;
use dflow_core::homalg::{render_groups, same_homology};
use dflow_core::io::{complex_json, field_json, homology_json, parse_complex, parse_field, IoError};
use dflow_core::morse::critical_cells;
use dflow_core::random::random_instance;
use dflow_core::spectral::{spectral_sequence, SpectralError};
use dflow_core::verify::{
    check_finite_directed, check_nerve_vanishing, check_unique_factorization, collapse_ufc_nerve, verify_flow,
    RegularSimplicialSet, UfcReport, VerificationReport,
};
use dflow_core::{Coefficients, FlowCategory, GradientVectorField, RegularCwComplex};

use crate::{Cli, Coeff, Command, Format};

pub const PARSE: u8 = 2;
pub const VALIDATION: u8 = 3;
pub const ASSERTION: u8 = 4;

/// Cell bound for `--seed` instances.
const RANDOM_CELLS: usize = 20;

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

/// Text to print and the exit code; a failed check still prints its report.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

fn fail(code: u8) -> impl FnOnce(anyhow::Error) -> Failure {
    move |error| Failure { code, error }
}

fn io_failure(e: IoError, what: &Path) -> Failure {
    let code = if e.is_parse_error() { PARSE } else { VALIDATION };
    Failure { code, error: anyhow!(e).context(format!("reading {}", what.display())) }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(fail(PARSE))
}

fn load(cli: &Cli) -> Result<(RegularCwComplex, GradientVectorField), Failure> {
    match (&cli.input, cli.seed) {
        (Some(path), _) => {
            let cx = parse_complex(&read(path)?).map_err(|e| io_failure(e, path))?;
            let v = match &cli.field {
                Some(fp) => parse_field(&cx, &read(fp)?).map_err(|e| io_failure(e, fp))?,
                None => GradientVectorField::empty(&cx),
            };
            Ok((cx, v))
        }
        (None, Some(seed)) => Ok(random_instance(seed, RANDOM_CELLS)),
        (None, None) => Err(Failure { code: PARSE, error: anyhow!("either --input or --seed is required") }),
    }
}

fn coefficients(c: Coeff) -> Coefficients {
    match c {
        Coeff::Z => Coefficients::Integers,
        Coeff::Q => Coefficients::Rationals,
    }
}

fn no_dot(cli: &Cli) -> Result<(), Failure> {
    if cli.format == Format::Dot {
        return Err(Failure { code: PARSE, error: anyhow!("--format dot is only available for `hom`") });
    }
    Ok(())
}

fn ok(text: String) -> Result<Outcome, Failure> {
    Ok(Outcome { text, code: 0 })
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let (cx, v) = load(cli)?;
    match &cli.command {
        Command::Validate => validate(cli, &cx, &v),
        Command::Hom { source, target } => hom(cli, &cx, &v, source, target),
        Command::Spectral => spectral(cli, cx, v),
        Command::Verify { face_poset: true } => verify_face_poset(cli, &cx),
        Command::Verify { face_poset: false } => verify(cli, cx, v),
        Command::Subdivide => subdivide(cli, &cx),
    }
}

fn validate(cli: &Cli, cx: &RegularCwComplex, v: &GradientVectorField) -> Result<Outcome, Failure> {
    no_dot(cli)?;
    let critical = critical_cells(cx, v);
    if cli.format == Format::Json {
        return ok(pretty(&json!({
            "complex": complex_json(cx),
            "field": field_json(cx, v),
            "critical": critical,
        })));
    }
    let mut s = String::new();
    let dim = cx.dimension().map_or("empty".to_string(), |d| format!("dimension {d}"));
    let _ = writeln!(s, "complex: {} cells, {dim}", cx.len());
    let _ = writeln!(s, "field: {} pairs", v.pairs().len());
    let _ = writeln!(s, "{} critical cells: {}", critical.len(), critical.join(", "));
    ok(s)
}

fn hom(
    cli: &Cli,
    cx: &RegularCwComplex,
    v: &GradientVectorField,
    source: &str,
    target: &str,
) -> Result<Outcome, Failure> {
    let h = hom_poset(cx, v, source, target).map_err(|e| fail(VALIDATION)(e.into()))?;
    match cli.format {
        Format::Json => ok(pretty(&h.to_json(cx))),
        Format::Dot => ok(h.to_dot(cx)),
        Format::Text => {
            let mut s = String::new();
            let profile: Vec<String> = h.rank_profile().iter().map(usize::to_string).collect();
            let _ = writeln!(
                s,
                "Hom({source},{target}): {} morphisms, rank profile {}, {} covering relations",
                h.len(),
                if profile.is_empty() { "-".to_string() } else { profile.join("/") },
                h.covering().len()
            );
            for (r, _) in h.rank_profile().iter().enumerate() {
                let layer: Vec<String> =
                    (0..h.len()).filter(|&i| h.ranks()[i] == r).map(|i| h.morphism(i).arrow(cx)).collect();
                let _ = writeln!(s, "rank {r}: {}", layer.join(" "));
            }
            ok(s)
        }
    }
}

fn spectral(cli: &Cli, cx: RegularCwComplex, v: GradientVectorField) -> Result<Outcome, Failure> {
    no_dot(cli)?;
    let coeff = coefficients(cli.coeff);
    let seq = spectral_sequence(&FlowCategory::new(cx, v), coeff).map_err(|e| {
        let code = if matches!(e, SpectralError::NotCollapsed { .. }) { ASSERTION } else { VALIDATION };
        Failure { code, error: e.into() }
    })?;
    if cli.format == Format::Json {
        return ok(pretty(&json!({
            "coefficients": coeff,
            "pages": [seq.e0.to_json(), seq.e1.to_json(), seq.e2.to_json()],
            "homology": homology_json(&seq.homology)["H"],
        })));
    }
    let mut s = String::new();
    for page in [&seq.e0, &seq.e1, &seq.e2] {
        s.push_str(&page.render_grid());
        s.push('\n');
    }
    let _ = writeln!(s, "H: {}", render_groups(&seq.homology, coeff));
    ok(s)
}

fn ufc_lines(s: &mut String, name: &str, r: &UfcReport) {
    let verdict = if r.pass { "pass" } else { "FAIL" };
    let _ = writeln!(s, "{name}: {verdict} ({} indecomposables)", r.indecomposables);
    for w in &r.witnesses {
        let ways: Vec<String> = w.factorizations.iter().map(|f| f.join(" ; ")).collect();
        let _ = writeln!(s, "  {} factors as {}", w.morphism, ways.join(" and as "));
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn verify(cli: &Cli, cx: RegularCwComplex, v: GradientVectorField) -> Result<Outcome, Failure> {
    no_dot(cli)?;
    let flow = FlowCategory::new(cx, v);
    let r: VerificationReport = verify_flow(&flow, cli.max_dim).map_err(|e| fail(ASSERTION)(e.into()))?;
    let code = if r.pass { 0 } else { ASSERTION };
    if cli.format == Format::Json {
        return Ok(Outcome { text: pretty(&serde_json::to_value(&r).expect("serializable")), code });
    }
    let mut s = String::new();
    for c in &r.cw_posets {
        let _ =
            writeln!(s, "{}: CW poset {} ({} elements, graded: {})", c.poset, pass(c.pass), c.elements.len(), c.graded);
        for e in c.elements.iter().filter(|e| !e.pass) {
            let h = render_groups(&e.homology, Coefficients::Integers);
            let _ =
                writeln!(s, "  {} (rank {}): interval homology [{h}] is not that of S^{}", e.element, e.rank, e.sphere);
        }
    }
    let _ = writeln!(s, "finite directed: {}", pass(r.finite_directed));
    ufc_lines(&mut s, "unique factorization", &r.unique_factorization);
    ufc_lines(&mut s, "unique factorization of relations", &r.level_one_factorization);
    let _ = writeln!(s, "nerve homology vanishes in degrees 2..{}: {}", cli.max_dim, pass(r.nerve_vanishing));
    match (&r.collapse, &r.collapse_error) {
        (Some(c), _) => {
            let counts: Vec<String> = c.counts.iter().map(usize::to_string).collect();
            let _ = writeln!(
                s,
                "collapse: {} (simplices by dimension {}; homology {} before, {} after)",
                pass(c.pass),
                counts.join("/"),
                render_groups(&c.homology_before, Coefficients::Integers),
                render_groups(&c.homology_after, Coefficients::Integers)
            );
        }
        (None, Some(e)) => {
            let _ = writeln!(s, "collapse: FAIL ({e})");
        }
        (None, None) => {}
    }
    let _ = writeln!(s, "all checks: {}", pass(r.pass));
    Ok(Outcome { text: s, code })
}

fn verify_face_poset(cli: &Cli, cx: &RegularCwComplex) -> Result<Outcome, Failure> {
    no_dot(cli)?;
    let cat = cx.face_poset().as_category();
    let directed = check_finite_directed(&cat);
    let ufc = check_unique_factorization(&cat);
    let vanishing = check_nerve_vanishing(&cat, cli.max_dim).map_err(|e| e.to_string());
    let collapse = collapse_ufc_nerve(&cat).map_err(|e| e.to_string()).and_then(|set| {
        let before = RegularSimplicialSet::nerve(&cat).map_err(|e| e.to_string())?;
        let same = same_homology(
            &before.chain_complex().homology(Coefficients::Integers),
            &set.chain_complex().homology(Coefficients::Integers),
        );
        Ok((set.counts(), same))
    });
    if cli.format == Format::Json {
        return ok(pretty(&json!({
            "finite_directed": directed,
            "unique_factorization": ufc,
            "nerve_vanishing": vanishing.as_ref().ok(),
            "collapse": collapse.as_ref().ok().map(|(c, same)| json!({"counts": c, "homology_preserved": same})),
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "face poset with {} elements as a category", cx.len());
    let _ = writeln!(s, "finite directed: {}", pass(directed));
    ufc_lines(&mut s, "unique factorization", &ufc);
    match vanishing {
        Ok(b) => {
            let _ = writeln!(s, "nerve homology vanishes in degrees 2..{}: {}", cli.max_dim, pass(b));
        }
        Err(e) => {
            let _ = writeln!(s, "nerve vanishing: not checked ({e})");
        }
    }
    match collapse {
        Ok((counts, same)) => {
            let counts: Vec<String> = counts.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "collapse: simplices by dimension {}, homology preserved: {same}", counts.join("/"));
        }
        Err(e) => {
            let _ = writeln!(s, "collapse: not run ({e})");
        }
    }
    ok(s)
}

fn subdivide(cli: &Cli, cx: &RegularCwComplex) -> Result<Outcome, Failure> {
    no_dot(cli)?;
    let coeff = coefficients(cli.coeff);
    let sd = cx.barycentric_subdivision();
    let h = sd.chain_complex().homology(coeff);
    if cli.format == Format::Json {
        return ok(pretty(&json!({
            "vertices": sd.vertices(),
            "simplices": sd.simplices(),
            "f_vector": sd.f_vector(),
            "homology": homology_json(&h)["H"],
        })));
    }
    let f: Vec<String> = sd.f_vector().iter().map(usize::to_string).collect();
    let mut s = String::new();
    let _ = writeln!(s, "barycentric subdivision: {} vertices, f-vector {}", sd.vertices().len(), f.join("/"));
    let _ = writeln!(s, "H: {}", render_groups(&h, coeff));
    ok(s)
}
