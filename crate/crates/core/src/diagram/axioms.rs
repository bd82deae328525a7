//! Randomized checks of the descent-category axioms in the chain model.
//!
//! Each check says whether it tests a literal chain isomorphism or a quasi-isomorphism:
//! * product: `s(X ⊕ Y) -> s(X) ⊕ s(Y)` regrouping is a chain isomorphism;
//! * factorisation: `μ` and the transposition are chain isomorphisms;
//! * exactness: vertexwise quasi-isomorphisms induce quasi-isomorphisms of simples, checked
//!   both through the cone and through induced maps on homology;
//! * acyclicity (4′): `X⁺` acyclic iff `λ` is a quasi-isomorphism;
//! * total fibers: the fiber-of-`λ` and iterated constructions have equal homology.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::morphism::DiagramMorphism;
use super::product::{factorisation_map, transposition_map, ProductDiagram};
use super::random::{conjugate_diagram, pad_with_acyclic, random_complex, random_diagram, DiagramBounds};
use super::simple::{augmentation_map, is_acyclic, simple, simple_augmented, simple_augmented_iterated, summands};
use super::total::{signed_block_map, Block};
use super::CubicalDiagram;
use crate::complex::ZComplex;
use crate::cube::{CubeIndex, CubeVertex};
use crate::Result;

#[derive(Clone, Debug)]
pub struct AxiomBounds {
    pub count: usize,
    pub max_cube: usize,
    pub diagram: DiagramBounds,
}

impl Default for AxiomBounds {
    fn default() -> Self {
        AxiomBounds {
            count: 200,
            max_cube: 2,
            diagram: DiagramBounds::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    /// What kind of equality is tested.
    pub kind: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub seed: u64,
    pub diagrams: usize,
    pub max_cube: usize,
    pub simples_built: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }
}

struct Tally {
    checks: Vec<AxiomCheck>,
}

impl Tally {
    fn new(names: &[(&str, &str)]) -> Self {
        Tally {
            checks: names
                .iter()
                .map(|(n, k)| AxiomCheck {
                    name: n.to_string(),
                    kind: k.to_string(),
                    instances: 0,
                    failures: Vec::new(),
                })
                .collect(),
        }
    }

    fn record(&mut self, name: &str, outcome: Result<bool>, witness: impl FnOnce() -> String) {
        let c = self
            .checks
            .iter_mut()
            .find(|c| c.name == name)
            .expect("known check");
        c.instances += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => c.failures.push(witness()),
            Err(e) => c.failures.push(format!("{}: {e}", witness())),
        }
    }
}

/// `s(X) ⊕ s(Y) -> s(X ⊕ Y)` by regrouping summands; must be a chain isomorphism.
fn product_regrouping(x: &CubicalDiagram, y: &CubicalDiagram) -> Result<bool> {
    let xy = x.direct_sum(y)?;
    let sx = simple(x)?;
    let sy = simple(y)?;
    let sxy = simple(&xy)?;
    let sum = sx.direct_sum(&sy);
    let mut src = summands(x);
    let nx = src.len();
    src.extend(summands(y));
    let tgt: Vec<_> = summands(x)
        .into_iter()
        .zip(summands(y))
        .flat_map(|(a, b)| [a, b])
        .collect();
    let blocks: Vec<Block> = (0..nx)
        .flat_map(|i| {
            [
                Block {
                    from: i,
                    to: 2 * i,
                    sign: 1,
                    map: None,
                },
                Block {
                    from: nx + i,
                    to: 2 * i + 1,
                    sign: 1,
                    map: None,
                },
            ]
        })
        .collect();
    let f = signed_block_map(&sum, &src, &sxy, &tgt, &blocks)?;
    Ok(f.is_isomorphism())
}

/// Augmented diagram whose maps along the last coordinate are isomorphisms; always acyclic.
fn iso_along_last<R: Rng>(rng: &mut R, n: usize, b: &DiagramBounds) -> Result<CubicalDiagram> {
    let idx = CubeIndex::new(n, true)?;
    if n == 0 {
        let c = random_complex(rng, b);
        return Ok(CubicalDiagram::constant(idx, &c));
    }
    let base = random_diagram(rng, CubeIndex::new(n - 1, true)?, b);
    let (copy, iso) = conjugate_diagram(rng, &base);
    let split = |v: CubeVertex| (v.truncate_last(), v.coord(n));
    CubicalDiagram::from_fn(
        idx,
        |v| match split(v) {
            (u, false) => base.vertex(u).clone(),
            (u, true) => copy.vertex(u).clone(),
        },
        |v, k| {
            let (u, top) = split(v);
            if k == n {
                iso.map(u).clone()
            } else if top {
                copy.edge(u, k).clone()
            } else {
                base.edge(u, k).clone()
            }
        },
    )
}

pub fn verify_descent_axioms(seed: u64, bounds: &AxiomBounds) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::new(&[
        ("d_squared_zero", "every simple satisfies D∘D = 0"),
        ("product", "chain isomorphism"),
        ("factorisation", "chain isomorphism (signed permutation)"),
        ("exactness", "quasi-isomorphism (cone and homology oracle)"),
        ("acyclicity", "equivalence of verdicts"),
        ("total_fiber_forms", "equal homology"),
    ]);
    let mut simples = 0;
    let b = &bounds.diagram;
    for i in 0..bounds.count {
        let n = if bounds.max_cube == 0 {
            0
        } else {
            1 + i % bounds.max_cube
        };
        let idx = CubeIndex::new(n, false).expect("small cube");
        let x = random_diagram(&mut rng, idx, b);
        let y = random_diagram(&mut rng, idx, b);
        let tag = |what: &str| format!("seed {seed} instance {i} (cube {n}): {what}");

        let built = simple(&x).and(simple(&y));
        simples += 2;
        tally.record("d_squared_zero", built.map(|_| true), || tag("simple rejected"));

        tally.record("product", product_regrouping(&x, &y), || {
            tag("regrouping is not a chain isomorphism")
        });

        if n >= 1 {
            let a = rng.gen_range(0..n);
            let split = ProductDiagram::new(
                CubeIndex::new(a, false).unwrap(),
                CubeIndex::new(n - 1 - a, false).unwrap(),
                x.clone(),
            );
            let outcome = split.and_then(|p| {
                simples += 2;
                Ok(factorisation_map(&p)?.is_isomorphism() && transposition_map(&p)?.is_isomorphism())
            });
            tally.record("factorisation", outcome, || tag(&format!("μ on □_{a} × □_{}", n - 1 - a)));
        }

        let pad = pad_with_acyclic(&mut rng, &x, b);
        let (_, conj) = conjugate_diagram(&mut rng, pad.target());
        let outcome = pad.then(&conj).and_then(|f: DiagramMorphism| {
            let sf = f.simple_map()?;
            simples += 2;
            Ok(sf.is_quasi_iso() && sf.induces_homology_isos())
        });
        tally.record("exactness", outcome, || tag("padding map not a quasi-isomorphism"));

        let aug_idx = CubeIndex::new(n, true).unwrap();
        let xa = match i % 3 {
            0 => Ok(random_diagram(&mut rng, aug_idx, b)),
            1 => {
                let c = random_complex(&mut rng, b);
                Ok(conjugate_diagram(&mut rng, &CubicalDiagram::constant(aug_idx, &c)).0)
            }
            _ => iso_along_last(&mut rng, n, b),
        };
        let outcome = xa.as_ref().map_err(clone_err).and_then(|xa| {
            simples += 1;
            Ok(is_acyclic(xa)? == augmentation_map(xa)?.is_quasi_iso())
        });
        tally.record("acyclicity", outcome, || tag("is_acyclic disagrees with λ"));
        let outcome = xa.as_ref().map_err(clone_err).and_then(|xa| {
            let a = simple_augmented(xa)?;
            let b = simple_augmented_iterated(xa)?;
            let (lo, hi) = window(&a, &b);
            Ok((lo..=hi).all(|q| a.homology(q) == b.homology(q)))
        });
        tally.record("total_fiber_forms", outcome, || tag("fiber and iterated forms differ"));
    }
    AxiomReport {
        seed,
        diagrams: bounds.count,
        max_cube: bounds.max_cube,
        simples_built: simples,
        checks: tally.checks,
    }
}

fn clone_err(e: &crate::Error) -> crate::Error {
    crate::Error::Internal(e.to_string())
}

fn window(a: &ZComplex, b: &ZComplex) -> (i64, i64) {
    (a.lo().min(b.lo()), a.hi().max(b.hi()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let r = verify_descent_axioms(
            7,
            &AxiomBounds {
                count: 12,
                ..AxiomBounds::default()
            },
        );
        for c in &r.checks {
            assert!(c.failures.is_empty(), "{}: {:?}", c.name, c.failures);
        }
        assert!(r.all_passed());
    }

    #[test]
    fn iso_along_last_is_acyclic() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 0..3 {
            let x = iso_along_last(&mut rng, n, &DiagramBounds::default()).unwrap();
            assert!(is_acyclic(&x).unwrap());
            assert!(augmentation_map(&x).unwrap().is_quasi_iso());
        }
    }
}
