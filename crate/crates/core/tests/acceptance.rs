//! One line per acceptance criterion; exits non-zero when any criterion fails.

use std::process::ExitCode;

use kdescent::complex::ZComplex;
use kdescent::cube::CubeIndex;
use kdescent::diagram::random::DiagramBounds;
use kdescent::diagram::{verify_descent_axioms, AxiomBounds};
use kdescent::kweight::corpus::{builtin, f2_corpus, parse_document, Document, DOCUMENTS};
use kdescent::kweight::{
    acyclic_square_sequence, assemble_kd, blowup_model, compare_hyperresolutions,
    kd_groups_and_weights, parse_hyperresolution, CompactSupportDoc, WeightEntry,
};
use kdescent::spectral::FilteredComplex;
use kdescent::towers::{comparison_lemma_holds, f2_tower_criterion, random_tower_diagram};
use kdescent::zmod::FgAbGroup;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

/// Invariant factors of a small integer matrix by plain row and column elimination.
fn oracle_smith(mut a: Vec<Vec<i64>>) -> Vec<i64> {
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                let q = a[i][t] / a[t][t];
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
                if a[i][t] != 0 {
                    done = false;
                    a.swap(t, i);
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / a[t][t];
                for r in a.iter_mut() {
                    r[j] -= q * r[t];
                }
                if a[t][j] != 0 {
                    done = false;
                    for r in a.iter_mut() {
                        r.swap(t, j);
                    }
                }
            }
            if done {
                break;
            }
        }
        diag.push(a[t][t].abs());
    }
    // divisibility chain: gcd/lcm sweep
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = gcd(diag[i], diag[j]);
            if g != 0 {
                let l = diag[i] / g * diag[j];
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag
}

/// Kernel rank and cokernel of `M : Z^cols -> Z^rows` from the oracle Smith form.
fn oracle_kernel_cokernel(m: Vec<Vec<i64>>) -> (FgAbGroup, FgAbGroup) {
    let (rows, cols) = (m.len(), m[0].len());
    let d = oracle_smith(m);
    let r = d.iter().filter(|&&x| x != 0).count();
    let torsion = d.iter().filter(|&&x| x > 1).map(|&x| x.into()).collect();
    (
        FgAbGroup::free(cols - r),
        FgAbGroup {
            rank: rows - r,
            torsion,
        },
    )
}

fn doc(name: &str) -> &'static str {
    builtin(name).expect("shipped document")
}

fn axioms() -> Verdict {
    let r = verify_descent_axioms(
        7,
        &AxiomBounds {
            count: 200,
            max_cube: 2,
            ..AxiomBounds::default()
        },
    );
    let failures: usize = r.checks.iter().map(|c| c.failures.len()).sum();
    if failures == 0 {
        Ok(format!("{} diagrams, {} simples, {} checks", r.diagrams, r.simples_built, r.checks.len()))
    } else {
        let first = r.checks.iter().find_map(|c| c.failures.first().map(|f| format!("{}: {f}", c.name)));
        Err(format!("{failures} failures, first {}", first.unwrap_or_default()))
    }
}

fn nodal() -> Verdict {
    let h = parse_hyperresolution(doc("nodal")).map_err(|e| e.to_string())?;
    let t = kd_groups_and_weights(&h, -3, 1).map_err(|e| e.to_string())?;
    let (ker, coker) = oracle_kernel_cokernel(vec![vec![1, 1, -1], vec![1, 1, -1]]);
    let pure = |n: i64, p: i64, g: &FgAbGroup| {
        t.row(n).map(|r| r.group == *g && r.weights == vec![WeightEntry { p, group: g.clone() }])
            == Some(true)
    };
    if ker != FgAbGroup::free(2) || coker != FgAbGroup::free(1) {
        return Err(format!("oracle disagrees with the expected values: {ker}, {coker}"));
    }
    if !pure(0, 0, &ker) || !pure(-1, 1, &coker) {
        return Err(format!("KD_0 / KD_-1 rows: {:?} {:?}", t.row(0), t.row(-1)));
    }
    if !(-3..-1).all(|n| t.row(n).unwrap().group.is_trivial()) || !t.properties_hold() {
        return Err("vanishing below -1 or a table property fails".into());
    }
    let s = acyclic_square_sequence(&h).map_err(|e| e.to_string())?;
    if !s.exact {
        return Err("long exact sequence of the square fails".into());
    }
    Ok(format!("KD_0 = {ker} (weight 0), KD_-1 = {coker} (weight 1), oracle SNF agrees"))
}

fn cusp() -> Verdict {
    let h = parse_hyperresolution(doc("cusp")).map_err(|e| e.to_string())?;
    let kd = assemble_kd(&h).map_err(|e| e.to_string())?;
    let (ker, coker) = oracle_kernel_cokernel(vec![vec![1, 1, -1]]);
    if kd.homology(0) == ker && kd.homology(-1) == coker && coker.is_trivial() {
        Ok(format!("KD_0 = {ker}, KD_-1 = 0, oracle SNF agrees"))
    } else {
        Err(format!("KD_0 = {}, KD_-1 = {}", kd.homology(0), kd.homology(-1)))
    }
}

fn blowups() -> Verdict {
    let mut out = Vec::new();
    for (name, want) in [("blowup_p2_point", [3, 5, 2]), ("blowup_p3_line", [4, 8, 4])] {
        let Document::Blowup(b) = parse_document(doc(name)).map_err(|e| e.to_string())? else {
            return Err(format!("{name} is not a blow-up document"));
        };
        let r = blowup_model(&b).and_then(|m| m.report()).map_err(|e| e.to_string())?;
        let s = r.sequences.iter().find(|s| s.n == 0).ok_or("no degree 0")?;
        let ranks = [s.x.clone(), s.middle.clone(), s.top.clone()];
        if !r.passed() || ranks != want.map(FgAbGroup::free) {
            return Err(format!("{name}: {r:?}"));
        }
        out.push(format!("0 -> Z^{} -> Z^{} -> Z^{} -> 0", want[0], want[1], want[2]));
    }
    Ok(format!("{}; cubes and front squares acyclic", out.join(", ")))
}

fn comparison_lemma() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bounds = DiagramBounds {
        max_rank: 2,
        ..DiagramBounds::default()
    };
    let mut failures = Vec::new();
    for i in 0..100 {
        let n = rng.gen_range(1..=2);
        let idx = CubeIndex::new(n, false).unwrap();
        let x = random_tower_diagram(&mut rng, idx, 3, &bounds);
        match comparison_lemma_holds(&x) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("#{i} on □_{n}")),
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    if failures.is_empty() {
        Ok("100 random tower diagrams".into())
    } else {
        Err(format!("{} failures: {}", failures.len(), failures.join(", ")))
    }
}

fn f2() -> Verdict {
    let corpus = f2_corpus();
    let mut exact = 0;
    for (name, x) in &corpus {
        let v = f2_tower_criterion(x).map_err(|e| format!("{name}: {e}"))?;
        if !v.agree {
            return Err(format!("{name}: {v:?}"));
        }
        exact += v.exact as usize;
    }
    Ok(format!("{} squares agree ({exact} exact, {} broken)", corpus.len(), corpus.len() - exact))
}

fn inflation() -> Verdict {
    let h1 = parse_hyperresolution(doc("nodal")).map_err(|e| e.to_string())?;
    let h2 = parse_hyperresolution(doc("nodal_inflated")).map_err(|e| e.to_string())?;
    if h2.cube().n() != 2 {
        return Err("inflated document is not a 2-cube".into());
    }
    let r = compare_hyperresolutions(&h1, &h2, -2, 1).map_err(|e| e.to_string())?;
    if r.all_isomorphic {
        Ok("KD_n and gr_p agree for n in [-2, 1]".into())
    } else {
        Err(format!("mismatches at {:?}", r.mismatches))
    }
}

fn compact_support() -> Verdict {
    let load = |name: &str| -> Result<_, String> {
        let c: CompactSupportDoc = serde_json::from_str(doc(name)).map_err(|e| e.to_string())?;
        c.assemble().map_err(|e| e.to_string())
    };
    let a1 = load("compact_a1")?;
    if a1.group(0) != FgAbGroup::free(1) || !a1.group(-1).is_trivial() || !a1.exact {
        return Err(format!("A1: {:?}", a1.rows));
    }
    let two = load("compact_two_points")?;
    if two.group(0) != FgAbGroup::free(1) || two.group(-1) != FgAbGroup::free(1) || !two.exact {
        return Err(format!("P1 minus two points: {:?}", two.rows));
    }
    let empty = load("compact_empty")?;
    let c: CompactSupportDoc = serde_json::from_str(doc("compact_empty")).unwrap();
    let whole = parse_hyperresolution(&serde_json::to_string(&c.compactification).unwrap())
        .and_then(|h| assemble_kd(&h))
        .map_err(|e| e.to_string())?;
    if !(-2..=2).all(|n| empty.group(n) == whole.homology(n)) {
        return Err("Y = ∅ does not reproduce KD".into());
    }
    Ok(format!("K^c_0(A1) = Z, K^c_-1(A1) = 0, {} exactness nodes, Y = ∅ gives KD", a1.nodes.len()))
}

fn convergence() -> Verdict {
    let mut checked = 0;
    for (name, text) in DOCUMENTS {
        let Ok(d) = parse_document(text) else {
            continue;
        };
        for x in d.diagrams().map_err(|e| format!("{name}: {e}"))? {
            let f = FilteredComplex::from_diagram(&x).map_err(|e| format!("{name}: {e}"))?;
            let c: &ZComplex = f.complex();
            let (lo, hi) = c.homology_range();
            for n in lo - 1..=hi + 1 {
                if !f.convergence_certificate(n) {
                    return Err(format!("{name} in degree {n}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (document, degree) pairs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("descent axioms on 200 random diagrams", axioms),
        ("nodal cubic KD and weights", nodal),
        ("cuspidal cubic KD", cusp),
        ("blow-up exactness", blowups),
        ("tower comparison lemma", comparison_lemma),
        ("(F2) criterion equivalence", f2),
        ("hyperresolution independence", inflation),
        ("compact support", compact_support),
        ("spectral sequence convergence", convergence),
    ];
    let mut failed = 0;
    for (i, (label, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {label}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {label}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
