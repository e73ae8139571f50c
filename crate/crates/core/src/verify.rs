//! Replays an example record: smoothness, generator invariance, group order and
//! (for fourfolds) the order of the symplectic part, against the stored values.

use std::fmt;

use crate::corpus::{Example, Kind};
use crate::forms::semi_invariance_factor;
use crate::groups::{closure, is_semi_permutation, modular_order_with_character, ModularOrder};
use crate::monomial::monomial_automorphisms;
use crate::smooth::{is_smooth, Smoothness};
use crate::{CycNum, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Exhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
            Status::Exhausted => "exhausted",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub id: String,
    pub checks: Vec<Check>,
    /// Projective order found, if any method produced one.
    pub order: Option<u64>,
    pub symplectic_order: Option<u64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
    pub fn exhausted(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Exhausted)
    }
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example {}", self.id)?;
        for c in &self.checks {
            writeln!(f, "  {:<11} {:<9} {}", c.name, c.status.to_string(), c.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub cap: usize,
    pub budget: usize,
    /// Groups up to this linear order are also closed exactly, and every
    /// element is checked against the form.
    pub exact_limit: usize,
    pub smoothness: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { cap: crate::groups::DEFAULT_CAP, budget: crate::smooth::DEFAULT_BUDGET, exact_limit: 2000, smoothness: true }
    }
}

fn compare(name: &'static str, got: u64, want: u64, partial: bool, how: &str) -> Check {
    if partial {
        let ok = want % got == 0;
        Check {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: format!("subgroup of order {got} divides {want} ({how}, generators partial)"),
        }
    } else {
        Check {
            name,
            status: if got == want { Status::Pass } else { Status::Fail },
            detail: format!("{got} (expected {want}, {how})"),
        }
    }
}

pub fn verify_example(ex: &Example, opts: &Options) -> Result<Report> {
    let mut checks = Vec::new();
    let partial = ex.partial.is_some();
    if let Some(why) = ex.partial {
        checks.push(Check { name: "generators", status: Status::Skipped, detail: why.to_string() });
    }

    if opts.smoothness {
        let (status, detail) = match is_smooth(&ex.form, opts.budget)? {
            Smoothness::Smooth => (Status::Pass, "smooth".to_string()),
            Smoothness::Singular(w) => (Status::Fail, format!("singular: {w}")),
            Smoothness::Exhausted => (Status::Exhausted, "budget exhausted".to_string()),
        };
        checks.push(Check { name: "smooth", status, detail });
    }

    // χ(A) = det A / λ² is trivial on the scalars of a fourfold group
    let mut chars: Vec<CycNum> = Vec::new();
    let mut exact = true;
    let mut invariant = true;
    for g in &ex.gens {
        match semi_invariance_factor(g, &ex.form)? {
            Some(l) => {
                exact &= l.is_one();
                let d = g.det();
                let n = crate::cyclo::lcm(l.conductor(), d.conductor());
                let l = l.embed(n)?;
                chars.push(&d.embed(n)? * &(&l * &l).inverse().expect("λ ≠ 0"));
            }
            None => invariant = false,
        }
    }
    checks.push(Check {
        name: "invariance",
        status: if invariant { Status::Pass } else { Status::Fail },
        detail: match (invariant, exact) {
            (true, true) => format!("{} generators fix F", ex.gens.len()),
            (true, false) => format!("{} generators fix F up to scalars", ex.gens.len()),
            _ => "a generator moves F".to_string(),
        },
    });
    if !invariant {
        return Ok(Report { id: ex.id.clone(), checks, order: None, symplectic_order: None });
    }

    let fourfold = ex.kind == Kind::Fourfold;
    let mut order = None;
    let mut symplectic_order = None;
    match modular_order_with_character(&ex.gens, fourfold.then_some(&chars[..]), opts.cap) {
        Ok(mo) => {
            let ModularOrder { order: lin, scalars, prime, .. } = mo;
            let proj = mo.projective() as u64;
            order = Some(proj);
            checks.push(compare("order", proj, ex.expected_order, partial, &format!("closure mod {prime}, {lin} matrices, {scalars} scalars")));
            if lin <= opts.exact_limit {
                let g = closure(&ex.gens, opts.exact_limit)?;
                let fixed = g.fixes_form(&ex.form)?;
                let ok = g.order() == lin && (fixed || !exact);
                checks.push(Check {
                    name: "elements",
                    status: if ok { Status::Pass } else { Status::Fail },
                    detail: format!("exact closure has {} elements{}", g.order(), if fixed { ", all fix F" } else { "" }),
                });
            }
            if let (Some(k), Some(want)) = (mo.projective_kernel(), ex.expected_symplectic) {
                symplectic_order = Some(k as u64);
                checks.push(compare("symplectic", k as u64, want, partial, "det = λ² count"));
            }
        }
        Err(Error::CapExceeded(n)) => {
            // monomial generating sets are counted from the support instead
            let structural = if ex.gens.iter().all(is_semi_permutation) && !partial {
                monomial_automorphisms(&ex.form).ok()
            } else {
                None
            };
            match structural {
                Some(mg) => {
                    // scalars fixing a cubic exactly: ξ3^k I
                    let proj = mg.linear_order / 3;
                    order = Some(proj);
                    checks.push(compare("order", proj, ex.expected_order, false, &format!("monomial count, closure above cap at {n}")));
                    if let Some(want) = ex.expected_symplectic {
                        let k = mg.det_one_count() / 3;
                        symplectic_order = Some(k);
                        checks.push(compare("symplectic", k, want, false, "monomial det = 1 count"));
                    }
                }
                None => checks.push(Check {
                    name: "order",
                    status: Status::Skipped,
                    detail: format!("closure above cap ({n} elements); expected {}", ex.expected_order),
                }),
            }
        }
        Err(e) => return Err(e),
    }
    Ok(Report { id: ex.id.clone(), checks, order, symplectic_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::example;

    #[test]
    fn klein_fivefold() {
        let r = verify_example(&example("X20").unwrap(), &Options::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.order, Some(301));
        assert_eq!(r.check("smooth").unwrap().status, Status::Pass);
        assert_eq!(r.check("elements").unwrap().status, Status::Pass);
    }

    #[test]
    fn fourfold_fifteen() {
        let r = verify_example(&example("X15'").unwrap(), &Options::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!((r.order, r.symplectic_order), (Some(216), Some(72)));
    }
}
