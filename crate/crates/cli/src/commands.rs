//! Subcommand implementations. All reports are plain serde structs with a
//! fixed field order, so JSON output is byte-identical across runs.

use std::fs;
use std::path::Path;

use serde::Serialize;

use eqehrhart::check::run_suite;
use eqehrhart::ehrhart::QuasiPolynomial;
use eqehrhart::equivariant::face_fixed_point_criterion;
use eqehrhart::fixed_locus::{fixed_polytope, verify_invariance};
use eqehrhart::gallery::{instance_by_name, partition_labels, Instance};
use eqehrhart::lattice_group::{character_table, CharacterTable};
use eqehrhart::CyclotomicValue;
use eqehrhart::{EquivariantContext, FiniteMatrixGroup, RationalPolytope};

use crate::document::{build_table, render_rat, InstanceDocument, RatScalar};
use crate::Format;

fn load(path: &Path) -> Result<InstanceDocument, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit_json<T: Serialize>(report: &T) -> Result<(), String> {
    let s = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    println!("{s}");
    Ok(())
}

/// One CSV field, quoted when it contains a delimiter.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

/// A multiplicity as JSON: a number when it is a safe integer, the canonical
/// string otherwise.
fn cyclo_json(v: &CyclotomicValue) -> serde_json::Value {
    if let Some(r) = v.as_rational() {
        if r.is_integer() {
            if let Ok(n) = i64::try_from(&r.to_integer()) {
                if n.abs() < (1 << 53) {
                    return serde_json::Value::from(n);
                }
            }
        }
    }
    serde_json::Value::from(v.render())
}

#[derive(Serialize)]
struct GroupInfo {
    order: usize,
    exponent: usize,
    num_classes: usize,
}

#[derive(Serialize)]
struct ClassRow {
    class: usize,
    size: usize,
    element_order: usize,
    fixed_dim: usize,
    denominator: usize,
    index: usize,
}

#[derive(Serialize)]
struct CriteriaReport {
    all_fixed_lattice: bool,
    first_non_lattice_class: Option<usize>,
    bad_element_witness: Option<usize>,
    face_fixed_points: bool,
    failing_face: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    lattice_rank: usize,
    dim: usize,
    full_dimensional: bool,
    lattice_polytope: bool,
    denominator: usize,
    reflexive: Option<bool>,
    group: GroupInfo,
    classes: Vec<ClassRow>,
    criteria: CriteriaReport,
}

fn analyze_report(
    p: &RationalPolytope,
    group: &FiniteMatrixGroup,
) -> Result<AnalyzeReport, String> {
    verify_invariance(p, group).map_err(|e| format!("{e}"))?;
    let mut classes = Vec::with_capacity(group.num_classes());
    let mut first_non_lattice = None;
    let mut bad_witness = None;
    let d = p.dim();
    for c in 0..group.num_classes() {
        let rep = group.class_rep(c);
        let rec = fixed_polytope(p, group, rep).map_err(|e| format!("{e}"))?;
        if rec.denominator != 1 && first_non_lattice.is_none() {
            first_non_lattice = Some(c);
        }
        let r = rec.index;
        if bad_witness.is_none()
            && r % rec.denominator == 0
            && (r * rec.fixed_space_dim) as i64 > d as i64 - r as i64 + 1
        {
            bad_witness = Some(c);
        }
        classes.push(ClassRow {
            class: c,
            size: group.classes()[c].len(),
            element_order: group.element_order(rep),
            fixed_dim: rec.fixed_space_dim,
            denominator: rec.denominator,
            index: rec.index,
        });
    }
    let face = face_fixed_point_criterion(p, group);
    let full = p.dim() == p.ambient();
    let reflexive = if full && p.is_lattice() {
        Some(p.is_reflexive().map_err(|e| format!("{e}"))?)
    } else {
        None
    };
    Ok(AnalyzeReport {
        lattice_rank: p.ambient(),
        dim: p.dim(),
        full_dimensional: full,
        lattice_polytope: p.is_lattice(),
        denominator: p.denominator(),
        reflexive,
        group: GroupInfo {
            order: group.order(),
            exponent: group.exponent(),
            num_classes: group.num_classes(),
        },
        classes,
        criteria: CriteriaReport {
            all_fixed_lattice: first_non_lattice.is_none(),
            first_non_lattice_class: first_non_lattice,
            bad_element_witness: bad_witness,
            face_fixed_points: face.is_ok(),
            failing_face: face.err(),
        },
    })
}

pub fn analyze(path: &Path, format: Format, cap: usize) -> Result<(), String> {
    let doc = load(path)?;
    let (p, group) = doc.to_parts(cap)?;
    let report = analyze_report(&p, &group)?;
    match format {
        Format::Json => emit_json(&report),
        Format::Text => {
            println!(
                "lattice rank {}, dim {}{}",
                report.lattice_rank,
                report.dim,
                if report.full_dimensional { "" } else { " (not full-dimensional)" }
            );
            println!(
                "group: order {}, exponent {}, {} conjugacy classes",
                report.group.order, report.group.exponent, report.group.num_classes
            );
            match report.reflexive {
                Some(true) => println!("reflexive: yes"),
                Some(false) => println!("reflexive: no"),
                None => println!("reflexive: n/a"),
            }
            println!("class  size  order  dim P_g  denominator  index");
            for c in &report.classes {
                println!(
                    "{:>5}  {:>4}  {:>5}  {:>7}  {:>11}  {:>5}",
                    c.class, c.size, c.element_order, c.fixed_dim, c.denominator, c.index
                );
            }
            println!(
                "all fixed polytopes lattice: {}",
                if report.criteria.all_fixed_lattice { "yes" } else { "no" }
            );
            match report.criteria.bad_element_witness {
                Some(c) => println!("non-polynomial witness: class {c}"),
                None => println!("non-polynomial witness: none"),
            }
            println!(
                "face fixed point criterion: {}",
                if report.criteria.face_fixed_points { "passes" } else { "fails" }
            );
            Ok(())
        }
        Format::Csv => {
            println!(
                "{}",
                csv_line(&[
                    "class".into(),
                    "size".into(),
                    "element_order".into(),
                    "fixed_dim".into(),
                    "denominator".into(),
                    "index".into()
                ])
            );
            for c in &report.classes {
                println!(
                    "{}",
                    csv_line(&[
                        c.class.to_string(),
                        c.size.to_string(),
                        c.element_order.to_string(),
                        c.fixed_dim.to_string(),
                        c.denominator.to_string(),
                        c.index.to_string()
                    ])
                );
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct PerClassForm {
    class: usize,
    numerator: String,
    denominator: String,
}

#[derive(Serialize)]
struct CoefficientRow {
    degree: usize,
    values: Vec<String>,
    multiplicities: Vec<serde_json::Value>,
}

#[derive(Serialize)]
struct HstarReport {
    polynomial: bool,
    labels: Vec<String>,
    per_class: Vec<PerClassForm>,
    coefficients: Option<Vec<CoefficientRow>>,
    effective: Option<bool>,
    witness_classes: Option<Vec<usize>>,
    phi_at_one: Vec<String>,
    phi_at_one_integral: bool,
}

fn resolve_table(
    doc: &InstanceDocument,
    group: &FiniteMatrixGroup,
    table_path: Option<&Path>,
) -> Result<CharacterTable, String> {
    if let Some(path) = table_path {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let rows: Vec<Vec<RatScalar>> =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        return build_table(&rows, group);
    }
    if let Some(table) = doc.table_override(group)? {
        return Ok(table);
    }
    character_table(group).map_err(|e| format!("{e}"))
}

fn irreducible_labels(
    doc: &InstanceDocument,
    group: &FiniteMatrixGroup,
    table: &CharacterTable,
) -> Vec<String> {
    if let Some(labels) = &doc.labels {
        if labels.len() == table.irreducibles.len() {
            return labels.clone();
        }
    }
    if let Some(labels) = partition_labels(group, table) {
        return labels;
    }
    table
        .degrees
        .iter()
        .enumerate()
        .map(|(i, d)| format!("chi{i}(deg {d})"))
        .collect()
}

pub fn hstar(
    path: &Path,
    format: Format,
    cap: usize,
    table_path: Option<&Path>,
) -> Result<(), String> {
    let doc = load(path)?;
    let (p, group) = doc.to_parts(cap)?;
    let ctx = EquivariantContext::new(p, group).map_err(|e| format!("{e}"))?;
    let table = resolve_table(&doc, ctx.group(), table_path)?;
    let labels = irreducible_labels(&doc, ctx.group(), &table);
    let h = ctx.equivariant_hstar();
    let per_class: Vec<PerClassForm> = h
        .per_class
        .iter()
        .enumerate()
        .map(|(c, f)| PerClassForm {
            class: c,
            numerator: f.reduced_numerator().render("t"),
            denominator: f.reduced_denominator().render("t"),
        })
        .collect();
    let decomposition = ctx.hstar_effectiveness(&h, &table);
    let coefficients = h.coefficients().map(|coeffs| {
        let mults = &decomposition.as_ref().expect("polynomial").0;
        coeffs
            .iter()
            .zip(mults)
            .enumerate()
            .map(|(i, (coeff, row))| CoefficientRow {
                degree: i,
                values: coeff.values.iter().map(|v| v.render()).collect(),
                multiplicities: row.iter().map(cyclo_json).collect(),
            })
            .collect::<Vec<_>>()
    });
    let witness_classes = match &h.verdict {
        eqehrhart::HStarVerdict::NonPolynomial { witness_classes } => {
            Some(witness_classes.clone())
        }
        _ => None,
    };
    let phi1 = ctx.phi_at_one().map_err(|e| format!("{e}"))?;
    let report = HstarReport {
        polynomial: h.is_polynomial(),
        labels,
        per_class,
        coefficients,
        effective: decomposition.map(|(_, e)| e),
        witness_classes,
        phi_at_one: phi1.values.values.iter().map(|v| v.render()).collect(),
        phi_at_one_integral: phi1.integral,
    };
    match format {
        Format::Json => emit_json(&report),
        Format::Text => {
            println!(
                "phi[t] is {}",
                if report.polynomial { "a polynomial" } else { "not a polynomial" }
            );
            for f in &report.per_class {
                println!("class {}: ({}) / ({})", f.class, f.numerator, f.denominator);
            }
            if let Some(rows) = &report.coefficients {
                println!("multiplicities over [{}]:", report.labels.join(", "));
                for row in rows {
                    let rendered: Vec<String> =
                        row.multiplicities.iter().map(|v| v.to_string()).collect();
                    println!("phi_{}: [{}]", row.degree, rendered.join(", "));
                }
                println!(
                    "effective: {}",
                    if report.effective == Some(true) { "yes" } else { "no" }
                );
            }
            println!(
                "phi[1] = [{}] ({})",
                report.phi_at_one.join(", "),
                if report.phi_at_one_integral { "integral" } else { "non-integral" }
            );
            Ok(())
        }
        Format::Csv => {
            if let Some(rows) = &report.coefficients {
                let mut header = vec!["degree".to_string()];
                header.extend(report.labels.iter().cloned());
                println!("{}", csv_line(&header));
                for row in rows {
                    let mut fields = vec![row.degree.to_string()];
                    fields.extend(row.multiplicities.iter().map(|v| match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    }));
                    println!("{}", csv_line(&fields));
                }
            } else {
                println!(
                    "{}",
                    csv_line(&["class".into(), "numerator".into(), "denominator".into()])
                );
                for f in &report.per_class {
                    println!(
                        "{}",
                        csv_line(&[
                            f.class.to_string(),
                            f.numerator.clone(),
                            f.denominator.clone()
                        ])
                    );
                }
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CountRow {
    m: usize,
    values: Vec<String>,
}

#[derive(Serialize)]
struct QpDoc {
    period: usize,
    minimal_period: usize,
    degree: usize,
    constituents: Vec<Vec<String>>,
}

fn qp_doc(qp: &QuasiPolynomial) -> QpDoc {
    QpDoc {
        period: qp.period(),
        minimal_period: qp.minimal_period(),
        degree: qp.degree(),
        constituents: qp
            .constituents()
            .iter()
            .map(|c| c.iter().map(render_rat).collect())
            .collect(),
    }
}

#[derive(Serialize)]
struct OrbitDoc {
    closed: QpDoc,
    signed: QpDoc,
    interior: QpDoc,
    signed_interior: QpDoc,
}

#[derive(Serialize)]
struct SeriesReport {
    terms: usize,
    num_classes: usize,
    closed: Vec<CountRow>,
    interior: Vec<CountRow>,
    orbit: OrbitDoc,
}

pub fn series(path: &Path, terms: usize, format: Format, cap: usize) -> Result<(), String> {
    let doc = load(path)?;
    let (p, group) = doc.to_parts(cap)?;
    let ctx = EquivariantContext::new(p, group).map_err(|e| format!("{e}"))?;
    let closed: Vec<CountRow> = (0..=terms)
        .map(|m| CountRow {
            m,
            values: ctx
                .counting_character(m as i64)
                .values
                .iter()
                .map(|v| v.render())
                .collect(),
        })
        .collect();
    let interior: Vec<CountRow> = (1..=terms)
        .map(|m| CountRow {
            m,
            values: ctx
                .interior_counting_character(m as i64)
                .values
                .iter()
                .map(|v| v.render())
                .collect(),
        })
        .collect();
    let orbits = ctx.orbit_quasipolynomials();
    let report = SeriesReport {
        terms,
        num_classes: ctx.group().num_classes(),
        closed,
        interior,
        orbit: OrbitDoc {
            closed: qp_doc(&orbits.closed),
            signed: qp_doc(&orbits.signed),
            interior: qp_doc(&orbits.interior),
            signed_interior: qp_doc(&orbits.signed_interior),
        },
    };
    match format {
        Format::Json => emit_json(&report),
        Format::Text => {
            println!("closed counts per class (m = 0..{terms}):");
            for row in &report.closed {
                println!("m = {:>3}: [{}]", row.m, row.values.join(", "));
            }
            println!("interior counts per class (m = 1..{terms}):");
            for row in &report.interior {
                println!("m = {:>3}: [{}]", row.m, row.values.join(", "));
            }
            println!(
                "orbit quasi-polynomial: period {} (minimal {}), degree {}",
                report.orbit.closed.period,
                report.orbit.closed.minimal_period,
                report.orbit.closed.degree
            );
            Ok(())
        }
        Format::Csv => {
            let mut header = vec!["kind".to_string(), "m".to_string()];
            header.extend((0..report.num_classes).map(|c| format!("class{c}")));
            println!("{}", csv_line(&header));
            for row in &report.closed {
                let mut fields = vec!["closed".to_string(), row.m.to_string()];
                fields.extend(row.values.iter().cloned());
                println!("{}", csv_line(&fields));
            }
            for row in &report.interior {
                let mut fields = vec!["interior".to_string(), row.m.to_string()];
                fields.extend(row.values.iter().cloned());
                println!("{}", csv_line(&fields));
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CheckOutcomeDoc {
    name: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct CheckReport {
    instance: String,
    all_passed: bool,
    outcomes: Vec<CheckOutcomeDoc>,
}

pub fn check(path: &Path, format: Format, cap: usize) -> Result<bool, String> {
    let doc = load(path)?;
    let (polytope, group) = doc.to_parts(cap)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    let inst = Instance {
        name,
        polytope,
        group,
    };
    // the suite reports panics as failures; keep the console clean
    let prev = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let report = run_suite(&inst);
    std::panic::set_hook(prev);
    let all_passed = report.all_passed();
    let doc = CheckReport {
        instance: report.instance.clone(),
        all_passed,
        outcomes: report
            .outcomes
            .iter()
            .map(|o| CheckOutcomeDoc {
                name: o.name.clone(),
                passed: o.passed,
                detail: o.detail.clone(),
            })
            .collect(),
    };
    match format {
        Format::Json => emit_json(&doc)?,
        _ => {
            for o in &doc.outcomes {
                println!("[{}] {}: {}", if o.passed { "ok" } else { "FAIL" }, o.name, o.detail);
            }
            println!(
                "{}: {}",
                doc.instance,
                if all_passed { "all properties hold" } else { "FAILURES FOUND" }
            );
        }
    }
    Ok(all_passed)
}

pub fn example(name: &str, output: Option<&Path>) -> Result<(), String> {
    let inst = instance_by_name(name)
        .ok_or_else(|| format!("unknown instance name: {name}"))?;
    let labels = if inst.group.order() <= 120 {
        character_table(&inst.group)
            .ok()
            .and_then(|table| partition_labels(&inst.group, &table))
    } else {
        None
    };
    let doc = InstanceDocument::from_parts(&inst.polytope, &inst.group, labels);
    let text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
    match output {
        Some(path) => {
            fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => println!("{text}"),
    }
    Ok(())
}
