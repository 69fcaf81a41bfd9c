//! Strength of forms and tuples by exhaustive decomposition search, the
//! diagonal lower bound, and the (heuristic) Jacobian codimension probe.
//!
//! The strength of a form `f` of degree d >= 2 is the minimal `s` with
//! `f = g_1 h_1 + ... + g_s h_s`, every factor homogeneous of degree
//! strictly between 0 and d. Nonzero linear forms have strength infinity;
//! the zero form has strength 0 by convention (the source material leaves
//! str(0) undefined — this convention makes tuple strength total, and a
//! tuple with dependent same-degree members correctly gets strength 0).

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{Elem, FqField};
use crate::poly::{divide_exact, exponents, Form, FormTuple};

/// A strength value: a nonnegative integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StrengthValue {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for StrengthValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StrengthValue::Finite(s) => write!(f, "{s}"),
            StrengthValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Outcome of a strength computation.
#[derive(Debug, Clone)]
pub struct StrengthResult {
    pub kind: StrengthKind,
    pub value: StrengthValue,
    /// For finite exact values: a decomposition with exactly `value`
    /// pairs, each summand a product of two lower-degree forms.
    pub witness: Option<Vec<(Form, Form)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrengthKind {
    Exact,
    /// Search ran out of budget after exhaustively ruling out all values
    /// below `value`.
    LowerBound,
}

/// All nonzero forms of the given degree, optionally canonicalized so the
/// first nonzero coefficient (in exponent order) is 1.
fn enumerate_forms(
    field: &FqField,
    nvars: usize,
    degree: u32,
    monic: bool,
) -> impl Iterator<Item = Form> + '_ {
    let exps = exponents(nvars, degree);
    let q = field.q() as u64;
    let total = q.checked_pow(exps.len() as u32).unwrap_or(u64::MAX);
    (1..total).filter_map(move |code| {
        let mut c = code;
        let mut coeffs = Vec::with_capacity(exps.len());
        for _ in 0..exps.len() {
            coeffs.push((c % q) as Elem);
            c /= q;
        }
        if monic {
            let first = coeffs.iter().find(|&&x| x != 0)?;
            if *first != 1 {
                return None;
            }
        }
        Form::new(
            nvars,
            degree,
            exps.iter().cloned().zip(coeffs).filter(|&(_, c)| c != 0),
        )
        .ok()
    })
}

struct Search<'a> {
    field: &'a FqField,
    tries: u64,
    used: u64,
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.tries {
            Err(Error::budget("strength search"))
        } else {
            Ok(())
        }
    }

    /// A decomposition of `f` into at most `s` pairs, if one exists.
    /// `f` is nonzero of degree >= 2 here.
    fn decompose(&mut self, f: &Form, s: usize) -> Result<Option<Vec<(Form, Form)>>> {
        if f.is_zero() {
            return Ok(Some(Vec::new()));
        }
        if s == 0 {
            return Ok(None);
        }
        let d = f.degree();
        if d < 2 {
            return Ok(None);
        }
        let n = f.nvars();
        for a in 1..=d / 2 {
            if s == 1 {
                // one pair: g must divide f exactly; division recovers h
                for g in enumerate_forms(self.field, n, a, true) {
                    self.tick()?;
                    if let Some(h) = divide_exact(self.field, f, &g) {
                        return Ok(Some(vec![(g, h)]));
                    }
                }
            } else {
                for g in enumerate_forms(self.field, n, a, true) {
                    for h in enumerate_forms(self.field, n, d - a, false) {
                        self.tick()?;
                        let rest = f.sub(self.field, &g.mul(self.field, &h)?)?;
                        if let Some(mut tail) = self.decompose(&rest, s - 1)? {
                            tail.insert(0, (g, h));
                            return Ok(Some(tail));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Exact strength by breadth-first search over `s = 0, 1, 2, ...` with a
/// witness decomposition, or a certified lower bound when the budget runs
/// out after level `s0` completed exhaustively.
pub fn strength_exhaustive(field: &FqField, f: &Form, budget: &Budget) -> Result<StrengthResult> {
    if f.is_zero() {
        return Ok(StrengthResult { kind: StrengthKind::Exact, value: StrengthValue::Finite(0), witness: Some(Vec::new()) });
    }
    if f.degree() == 1 {
        return Ok(StrengthResult { kind: StrengthKind::Exact, value: StrengthValue::Infinite, witness: None });
    }
    // every monomial of degree >= 2 splits, so num_terms pairs always suffice
    let cap = f.num_terms();
    let mut search = Search { field, tries: budget.tries, used: 0 };
    for s in 1..=cap {
        match search.decompose(f, s) {
            Ok(Some(witness)) => {
                debug_assert_eq!(witness.len(), s);
                // replay the identity
                let mut acc = Form::zero(f.nvars(), f.degree());
                for (g, h) in &witness {
                    acc = acc.add(field, &g.mul(field, h)?)?;
                }
                assert_eq!(&acc, f, "strength witness must reconstruct the form");
                return Ok(StrengthResult {
                    kind: StrengthKind::Exact,
                    value: StrengthValue::Finite(s),
                    witness: Some(witness),
                });
            }
            Ok(None) => {}
            Err(Error::BudgetExceeded { .. }) => {
                return Ok(StrengthResult {
                    kind: StrengthKind::LowerBound,
                    value: StrengthValue::Finite(s),
                    witness: None,
                });
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("a form with t terms has strength <= t")
}

/// Tuple strength: the minimum of `strength_exhaustive` over all
/// nontrivial same-degree linear combinations. The empty tuple has
/// strength infinity.
pub fn tuple_strength(field: &FqField, ft: &FormTuple, budget: &Budget) -> Result<StrengthResult> {
    if ft.is_empty() {
        return Ok(StrengthResult { kind: StrengthKind::Exact, value: StrengthValue::Infinite, witness: None });
    }
    let mut best: Option<StrengthResult> = None;
    let mut any_bound = false;
    // group indices by degree
    let mut degrees: Vec<u32> = ft.forms().iter().map(|f| f.degree()).collect();
    degrees.dedup();
    for &d in &degrees {
        let members: Vec<&Form> = ft.forms().iter().filter(|f| f.degree() == d).collect();
        let m = members.len();
        let q = field.q() as u64;
        let total = q.pow(m as u32);
        for code in 1..total {
            let mut lambda = Vec::with_capacity(m);
            let mut c = code;
            for _ in 0..m {
                lambda.push((c % q) as Elem);
                c /= q;
            }
            // canonical scaling: first nonzero coefficient 1
            if *lambda.iter().find(|&&x| x != 0).unwrap() != 1 {
                continue;
            }
            let mut combo = Form::zero(ft.nvars(), d);
            for (&l, f) in lambda.iter().zip(&members) {
                combo = combo.add(field, &f.scale(field, l))?;
            }
            let r = strength_exhaustive(field, &combo, budget)?;
            if r.kind == StrengthKind::LowerBound {
                any_bound = true;
            }
            if best.as_ref().is_none_or(|b| r.value < b.value) {
                best = Some(r);
            }
        }
    }
    let mut best = best.expect("at least one nontrivial combination");
    if any_bound {
        // some combination was undecided; the minimum is only a bound if
        // the undecided one could be smaller — conservatively downgrade
        best.kind = StrengthKind::LowerBound;
        best.witness = None;
    }
    Ok(best)
}

/// Certified strength lower bound `ceil(n/2)` for a diagonal form with
/// `n` nonzero terms, valid when the characteristic does not divide the
/// degree.
pub fn diagonal_rank_bound(field: &FqField, f: &Form) -> Result<usize> {
    let d = f.degree();
    let mut n = 0usize;
    for (exp, _) in f.terms() {
        if exp.iter().filter(|&&e| e > 0).count() != 1 {
            return Err(Error::NotDiagonal);
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::NotDiagonal);
    }
    if d % field.p() == 0 {
        return Err(Error::CharDividesDegree);
    }
    Ok(n.div_ceil(2))
}

/// Monte-Carlo estimate of the codimension of the common zero locus of
/// the first-order partials of `f`. NON-CERTIFIED: heuristic strength
/// indicator only; never feeds certificates.
pub fn jacobian_codim_probe(field: &FqField, f: &Form, trials: u64) -> f64 {
    let n = f.nvars();
    let partials: Vec<Form> = (0..n).map(|i| f.derivative(field, i)).collect();
    let q = field.q() as u64;
    let qf = field.q() as f64;
    let total = q.checked_pow(n as u32);
    let (hits, samples) = match total {
        Some(t) if t <= trials => {
            // exhaustive: exact count of common zeros
            let mut hits = 0u64;
            for code in 0..t {
                let v = crate::linalg::decode_vector(field, code, n);
                if partials.iter().all(|g| g.eval(field, &v) == 0) {
                    hits += 1;
                }
            }
            (hits, t)
        }
        _ => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6a636f70);
            let mut hits = 0u64;
            for _ in 0..trials {
                let v: Vec<Elem> = (0..n).map(|_| rng.gen_range(0..field.q()) as Elem).collect();
                if partials.iter().all(|g| g.eval(field, &v) == 0) {
                    hits += 1;
                }
            }
            (hits.max(1), trials)
        }
    };
    let frac = hits as f64 / samples as f64;
    -(frac.ln()) / qf.ln()
}
