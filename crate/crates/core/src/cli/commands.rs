use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use super::report::{InputDigest, RunReport, Table, Violation};
use super::{Command, DegreeRange};
use crate::diagram::{simple, simple_augmented, verify_descent_axioms, AxiomBounds, CubicalDiagram};
use crate::kweight::corpus::{builtin, f2_corpus, parse_document, Document};
use crate::kweight::{
    blowup_model, compare_hyperresolutions, inflate_identity_face, kd_groups_and_weights,
    Hyperresolution,
};
use crate::spectral::FilteredComplex;
use crate::towers::f2_tower_criterion;
use crate::zmod::FgAbGroup;
use crate::{Error, Result};

struct Loaded {
    digest: InputDigest,
    name: String,
    doc: Document,
}

/// Reads a file, falling back to the built-in corpus.
fn read_input(name: &str) -> Result<(InputDigest, String)> {
    let path = Path::new(name);
    let text = if path.is_file() {
        std::fs::read_to_string(path)?
    } else if let Some(t) = builtin(name) {
        t.to_string()
    } else {
        return Err(Error::invalid(name, "no such file or built-in document"));
    };
    Ok((InputDigest::of(name, text.as_bytes()), text))
}

fn load(name: &str) -> Result<Loaded> {
    let (digest, text) = read_input(name)?;
    let doc = parse_document(&text).map_err(|e| e.within(name))?;
    let display = match &doc {
        Document::Hyperresolution(h) => h.name.clone(),
        Document::Blowup(b) => b.name.clone(),
        Document::Compact(c) => c.name.clone(),
        Document::Diagram(_) => name.to_string(),
    };
    Ok(Loaded {
        digest,
        name: display,
        doc,
    })
}

fn hyperresolution(l: &Loaded) -> Result<Hyperresolution> {
    match &l.doc {
        Document::Hyperresolution(h) => Ok(h.clone()),
        Document::Diagram(x) if !x.index().augmented() => Ok(Hyperresolution::from_diagram(
            &l.name,
            x.index().n() as i64,
            x.clone(),
        )),
        d => Err(Error::invalid(
            &l.digest.name,
            format!("expected a hyperresolution document, found a {} document", d.kind()),
        )),
    }
}

fn group_text(g: &FgAbGroup) -> String {
    g.to_string()
}

fn weights_text(w: &[crate::kweight::WeightEntry]) -> String {
    w.iter()
        .map(|e| format!("gr_{} = {}", e.p, e.group))
        .collect::<Vec<_>>()
        .join(", ")
}

fn check(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn homology_window(c: &crate::complex::ZComplex, range: Option<DegreeRange>) -> (i64, i64) {
    match range {
        Some(DegreeRange(a, b)) => (a, b),
        None => c.homology_range(),
    }
}

pub(super) fn dispatch(cmd: &Command) -> Result<(RunReport, String)> {
    match cmd {
        Command::Validate { docs } => validate(docs),
        Command::Simple { doc, range } => simple_cmd(doc, *range),
        Command::Ss { doc, pages, range } => ss(doc, *pages, *range),
        Command::Kd { doc, range } => kd(doc, *range),
        Command::Kdc { doc } => kdc(doc),
        Command::Blowup { doc } => blowup(doc),
        Command::Compare {
            first,
            second,
            inflate,
            range,
        } => compare(first, second.as_deref(), *inflate, *range),
        Command::CheckAxioms {
            seed,
            max_cube,
            count,
        } => axioms(*seed, *max_cube, *count),
        Command::F2 { doc } => f2(doc.as_deref()),
    }
}

fn validate(docs: &[String]) -> Result<(RunReport, String)> {
    let mut digests = Vec::new();
    let mut results = Vec::new();
    let mut text = String::new();
    for d in docs {
        let l = load(d)?;
        writeln!(text, "{d}: ok ({}, {})", l.doc.kind(), l.name).unwrap();
        results.push(json!({"input": d, "kind": l.doc.kind(), "name": l.name}));
        digests.push(l.digest);
    }
    Ok((RunReport::new("validate", digests, Value::Array(results), vec![]), text))
}

fn simple_cmd(doc: &str, range: Option<DegreeRange>) -> Result<(RunReport, String)> {
    let l = load(doc)?;
    let c = match &l.doc {
        Document::Diagram(x) if x.index().augmented() => simple_augmented(x)?,
        Document::Blowup(b) => simple_augmented(&blowup_model(b)?.front)?,
        _ => simple(&hyperresolution(&l)?.diagram)?,
    };
    let (lo, hi) = homology_window(&c, range);
    let mut t = Table::new(&["m", "rank", "H_m"]);
    let mut rows = Vec::new();
    for m in lo..=hi {
        let h = c.homology(m);
        t.row(vec![m.to_string(), c.rank(m).to_string(), group_text(&h)]);
        rows.push(json!({"m": m, "rank": c.rank(m), "homology": h}));
    }
    let text = format!("simple complex of {}\n{}", l.name, t.render());
    let results = json!({"name": l.name, "complex": c.to_doc(), "degrees": rows});
    Ok((RunReport::new("simple", vec![l.digest], results, vec![]), text))
}

fn filtered_of(l: &Loaded) -> Result<FilteredComplex> {
    let x: CubicalDiagram = match &l.doc {
        Document::Hyperresolution(h) => h.diagram.clone(),
        other => other
            .diagrams()?
            .into_iter()
            .next()
            .ok_or_else(|| Error::invalid("$", "document has no diagram"))?,
    };
    FilteredComplex::from_diagram(&x)
}

fn ss(doc: &str, pages: Option<i64>, range: Option<DegreeRange>) -> Result<(RunReport, String)> {
    let l = load(doc)?;
    if matches!(&l.doc, Document::Compact(_)) {
        return Err(Error::invalid(doc, "use kdc for compact-support documents"));
    }
    let f = filtered_of(&l)?;
    let last = pages.unwrap_or(f.stable_page().max(1) + 1);
    if last < 1 {
        return Err(Error::invalid("--pages", "must be at least 1"));
    }
    let (lo, hi) = homology_window(f.complex(), range);
    let in_range = |p: i64, q: i64| (lo..=hi).contains(&(q - p));
    let mut text = format!("weight spectral sequence of {}\n", l.name);
    let mut page_reports = Vec::new();
    for r in 1..=last {
        let page = f.page(r);
        let mut t = Table::new(&["p", "q", "E"]);
        for e in page.nonzero() {
            if in_range(e.p, e.q) {
                t.row(vec![e.p.to_string(), e.q.to_string(), group_text(&e.group)]);
            }
        }
        writeln!(text, "E_{r}").unwrap();
        text.push_str(&t.render());
        let mut rep = page.report();
        rep.entries.retain(|e| in_range(e.p, e.q));
        rep.d.retain(|d| in_range(d.from[0], d.from[1]) || in_range(d.to[0], d.to[1]));
        for d in &rep.d {
            writeln!(
                text,
                "d_{r}: ({},{}) -> ({},{})  {}",
                d.from[0],
                d.from[1],
                d.to[0],
                d.to[1],
                serde_json::to_string(&d.matrix).unwrap()
            )
            .unwrap();
        }
        page_reports.push(rep);
    }
    let mut violations = Vec::new();
    let mut certificates = Vec::new();
    for n in lo..=hi {
        let ok = f.convergence_certificate(n);
        if !ok {
            violations.push(Violation::new("convergence", format!("{} in degree {n}", l.name)));
        }
        certificates.push(json!({"n": n, "holds": ok}));
    }
    writeln!(
        text,
        "convergence certificate for n in {lo}..{hi}: {}",
        check(violations.is_empty())
    )
    .unwrap();
    let results = json!({"name": l.name, "pages": page_reports, "convergence": certificates});
    Ok((RunReport::new("ss", vec![l.digest], results, violations), text))
}

fn kd(doc: &str, range: Option<DegreeRange>) -> Result<(RunReport, String)> {
    let l = load(doc)?;
    let h = hyperresolution(&l)?;
    let (lo, hi) = match range {
        Some(DegreeRange(a, b)) => (a, b),
        None => crate::kweight::assemble_kd(&h)?.homology_range(),
    };
    let table = kd_groups_and_weights(&h, lo, hi)?;
    let mut t = Table::new(&["n", "KD_n", "weights"]);
    for r in &table.rows {
        t.row(vec![r.n.to_string(), group_text(&r.group), weights_text(&r.weights)]);
    }
    let mut text = format!(
        "KD of {} (dimension {}, cube {})\n{}",
        table.name,
        table.dimension,
        table.cube,
        t.render()
    );
    let mut violations = Vec::new();
    let mut flag = |ok: bool, property: &str, label: String| {
        writeln!(text, "{label}: {}", check(ok)).unwrap();
        if !ok {
            violations.push(Violation::new(property, format!("{}: {label}", table.name)));
        }
    };
    flag(
        table.vanishing_below_dimension,
        "dimension-vanishing",
        format!("KD_n = 0 below minus the dimension ({})", -table.dimension),
    );
    if let Some(ok) = table.vanishing_below_cube {
        flag(ok, "cube-vanishing", format!("KD_n = 0 below minus the cube size ({})", -(table.cube as i64)));
    }
    flag(
        table.weight_bound,
        "weight-bound",
        format!("gr_p = 0 above the cube size ({})", table.cube),
    );
    flag(table.convergence, "convergence", "convergence certificate".into());
    let results = serde_json::to_value(&table)?;
    Ok((RunReport::new("kd", vec![l.digest], results, violations), text))
}

fn kdc(doc: &str) -> Result<(RunReport, String)> {
    let l = load(doc)?;
    let Document::Compact(c) = &l.doc else {
        return Err(Error::invalid(doc, "expected a compact-support document"));
    };
    let k = c.assemble()?;
    let mut t = Table::new(&["n", "K^c_n", "K_n(compactification)", "K_n(boundary)"]);
    for r in &k.rows {
        t.row(vec![
            r.n.to_string(),
            group_text(&r.compact),
            group_text(&r.whole),
            group_text(&r.boundary),
        ]);
    }
    let mut text = format!("compact support: {}\n{}", k.name, t.render());
    writeln!(text, "long exact sequence: {}", check(k.exact)).unwrap();
    let violations = k
        .nodes
        .iter()
        .filter(|n| !n.exact)
        .map(|n| Violation::new("long-exact-sequence", format!("{} node {} degree {}", k.name, n.node, n.degree)))
        .collect();
    let results = serde_json::to_value(&k)?;
    Ok((RunReport::new("kdc", vec![l.digest], results, violations), text))
}

fn blowup(doc: &str) -> Result<(RunReport, String)> {
    let l = load(doc)?;
    let Document::Blowup(b) = &l.doc else {
        return Err(Error::invalid(doc, "expected a blow-up document"));
    };
    let r = blowup_model(b)?.report()?;
    let mut text = format!("blow-up model: {} (codimension {})\n", r.name, r.d);
    let mut violations = Vec::new();
    for (ok, label) in [
        (r.commutes, "square commutes"),
        (r.psi_invertible, "Ψ invertible"),
        (r.cube_acyclic, "3-cube acyclic"),
        (r.front_acyclic, "front square acyclic"),
        (r.back_acyclic, "back square acyclic"),
    ] {
        writeln!(text, "{label}: {}", check(ok)).unwrap();
        if !ok {
            violations.push(Violation::new(label, r.name.clone()));
        }
    }
    let mut t = Table::new(&["n", "sequence", "exact"]);
    for s in &r.sequences {
        t.row(vec![
            s.n.to_string(),
            format!("0 -> {} -> {} -> {} -> 0", s.x, s.middle, s.top),
            check(s.exact).into(),
        ]);
        if !s.exact {
            violations.push(Violation::new("short-exactness", format!("{} degree {}", r.name, s.n)));
        }
    }
    text.push_str(&t.render());
    let results = serde_json::to_value(&r)?;
    Ok((RunReport::new("blowup", vec![l.digest], results, violations), text))
}

fn compare(
    first: &str,
    second: Option<&str>,
    inflate: bool,
    range: Option<DegreeRange>,
) -> Result<(RunReport, String)> {
    let a = load(first)?;
    let h1 = hyperresolution(&a)?;
    let mut digests = vec![a.digest.clone()];
    let h2 = match (second, inflate) {
        (Some(s), false) => {
            let b = load(s)?;
            digests.push(b.digest.clone());
            hyperresolution(&b)?
        }
        (None, true) => inflate_identity_face(&h1)?,
        _ => {
            return Err(Error::invalid(
                "compare",
                "give a second document or --inflate, not both",
            ))
        }
    };
    let (lo, hi) = match range {
        Some(DegreeRange(x, y)) => (x, y),
        None => {
            let (a1, b1) = crate::kweight::assemble_kd(&h1)?.homology_range();
            let (a2, b2) = crate::kweight::assemble_kd(&h2)?.homology_range();
            (a1.min(a2), b1.max(b2))
        }
    };
    let r = compare_hyperresolutions(&h1, &h2, lo, hi)?;
    let mut t = Table::new(&["n", "first", "second", "isomorphic"]);
    for row in &r.rows {
        t.row(vec![
            row.n.to_string(),
            group_text(&row.first),
            group_text(&row.second),
            check(row.isomorphic).into(),
        ]);
        for w in &row.weights {
            t.row(vec![
                format!("  gr_{}", w.p),
                group_text(&w.first),
                group_text(&w.second),
                check(w.isomorphic).into(),
            ]);
        }
    }
    let text = format!("{} vs {}\n{}", r.first, r.second, t.render());
    let violations = r
        .mismatches
        .iter()
        .map(|(n, p)| {
            let spot = match p {
                Some(p) => format!("n = {n}, weight {p}"),
                None => format!("n = {n}"),
            };
            Violation::new("hyperresolution-independence", spot)
        })
        .collect();
    let results = serde_json::to_value(&r)?;
    Ok((RunReport::new("compare", digests, results, violations), text))
}

fn axioms(seed: u64, max_cube: usize, count: usize) -> Result<(RunReport, String)> {
    let bounds = AxiomBounds {
        count,
        max_cube,
        ..AxiomBounds::default()
    };
    let r = verify_descent_axioms(seed, &bounds);
    let mut t = Table::new(&["check", "instances", "failures"]);
    let mut violations = Vec::new();
    for c in &r.checks {
        t.row(vec![c.name.clone(), c.instances.to_string(), c.failures.len().to_string()]);
        if let Some(w) = c.failures.first() {
            violations.push(Violation::new(&c.name, w.clone()));
        }
    }
    let text = format!(
        "descent axioms: seed {seed}, {} diagrams up to □_{max_cube}, {} simples\n{}",
        r.diagrams,
        r.simples_built,
        t.render()
    );
    let results = serde_json::to_value(&r)?;
    Ok((RunReport::new("check-axioms", vec![], results, violations), text))
}

fn f2(doc: Option<&str>) -> Result<(RunReport, String)> {
    let (digests, squares) = match doc {
        None => (vec![], f2_corpus()),
        Some(d) => {
            let l = load(d)?;
            let sq = match &l.doc {
                Document::Diagram(x) => x.clone(),
                Document::Blowup(b) => blowup_model(b)?.front,
                other => {
                    return Err(Error::invalid(
                        d,
                        format!("expected an augmented square, found a {} document", other.kind()),
                    ))
                }
            };
            (vec![l.digest], vec![(l.name, sq)])
        }
    };
    let mut t = Table::new(&["square", "E2-acyclic", "exact", "agree"]);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for (name, sq) in &squares {
        let v = f2_tower_criterion(sq)?;
        t.row(vec![
            name.clone(),
            v.e2_acyclic.to_string(),
            v.exact.to_string(),
            check(v.agree).into(),
        ]);
        if !v.agree {
            violations.push(Violation::new("f2-equivalence", name.clone()));
        }
        rows.push(json!({"square": name, "verdict": v}));
    }
    let text = format!("(F2) criterion on {} squares\n{}", squares.len(), t.render());
    Ok((RunReport::new("f2", digests, Value::Array(rows), violations), text))
}
