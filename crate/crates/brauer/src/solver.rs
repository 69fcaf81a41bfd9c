//! Budgeted point search: the engine behind every "find a vector with
//! these vanishing and non-vanishing conditions" step.
//!
//! Three routes, tried in order: linear conditions are eliminated by exact
//! kernel computation; an all-diagonal residual system is solved by
//! dynamic programming over value tuples (complete — proves emptiness);
//! anything else falls to a deterministic structured sweep that visits
//! every nonzero vector exactly once in support-size-major order, so small
//! supports are found first and a finished sweep proves emptiness.

use std::collections::HashSet;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{Elem, FqField};
use crate::linalg;
use crate::poly::{Form, Subspace};

/// Outcome of a bounded sweep.
enum Sweep {
    Found(Vec<Elem>),
    Exhausted,
    OutOfBudget,
}

/// Visit every nonzero vector of length `dim` exactly once, support sizes
/// ascending, support positions in lex order, values odometer-ascending
/// in the field order. Stops at the first accepted vector.
fn structured_sweep(
    field: &FqField,
    dim: usize,
    budget: &Budget,
    mut accept: impl FnMut(&[Elem]) -> bool,
) -> Sweep {
    let mut used: u64 = 0;
    let units: Vec<Elem> = field.units().collect();
    for s in 1..=dim {
        // support position combinations in lex order
        let mut pos: Vec<usize> = (0..s).collect();
        loop {
            // odometer over unit values at the chosen positions
            let mut vals = vec![0usize; s];
            loop {
                used += 1;
                if used > budget.tries {
                    return Sweep::OutOfBudget;
                }
                let mut v = vec![0 as Elem; dim];
                for (k, &p) in pos.iter().enumerate() {
                    v[p] = units[vals[k]];
                }
                if accept(&v) {
                    return Sweep::Found(v);
                }
                // advance odometer (last position fastest)
                let mut k = s;
                let done = loop {
                    if k == 0 {
                        break true;
                    }
                    k -= 1;
                    if vals[k] + 1 < units.len() {
                        vals[k] += 1;
                        for x in vals.iter_mut().skip(k + 1) {
                            *x = 0;
                        }
                        break false;
                    }
                };
                if done {
                    break;
                }
            }
            // next position combination
            let mut i = s;
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                if pos[i] + 1 <= dim - (s - i) {
                    pos[i] += 1;
                    for j in i + 1..s {
                        pos[j] = pos[j - 1] + 1;
                    }
                    break false;
                }
            };
            if done {
                break;
            }
        }
    }
    Sweep::Exhausted
}

/// A simultaneous diagonal system: forms `f_j = sum_i coeffs[j][i] *
/// x_i^{degrees[j]}` on a common variable set.
pub struct DiagonalSystem {
    pub coeffs: Vec<Vec<Elem>>,
    pub degrees: Vec<u32>,
}

impl DiagonalSystem {
    /// Recognize an all-diagonal form list (every term univariate).
    pub fn recognize(forms: &[Form]) -> Option<DiagonalSystem> {
        let n = forms.first()?.nvars();
        let mut coeffs = Vec::with_capacity(forms.len());
        let mut degrees = Vec::with_capacity(forms.len());
        for f in forms {
            let mut row = vec![0 as Elem; n];
            for (exp, &c) in f.terms() {
                let mut support = exp.iter().enumerate().filter(|(_, &e)| e > 0);
                let (i, _) = support.next()?;
                if support.next().is_some() {
                    return None;
                }
                row[i] = c;
            }
            coeffs.push(row);
            degrees.push(f.degree());
        }
        Some(DiagonalSystem { coeffs, degrees })
    }

    fn n(&self) -> usize {
        self.coeffs.first().map_or(0, |r| r.len())
    }

    /// Value tuple contributed by coordinate `i` taking value `x`.
    fn contrib(&self, field: &FqField, i: usize, x: Elem) -> Vec<Elem> {
        self.degrees
            .iter()
            .zip(&self.coeffs)
            .map(|(&d, row)| field.mul(row[i], field.pow(x, d)))
            .collect()
    }

    /// First nontrivial common zero (coordinates chosen ascending, each
    /// taking the least workable value) that also satisfies `accept`, or
    /// `None` if the enumeration proves there is none. `Err` only on
    /// budget exhaustion while filtering through `accept`.
    pub fn solve(
        &self,
        field: &FqField,
        budget: &Budget,
        mut accept: impl FnMut(&[Elem]) -> bool,
    ) -> Result<Option<Vec<Elem>>> {
        let n = self.n();
        let r = self.degrees.len();
        // reach[j]: suffix-sum tuples achievable from coords j..n, split
        // by whether some coordinate is already nonzero
        let mut reach_any: Vec<HashSet<Vec<Elem>>> = vec![HashSet::new(); n + 1];
        let mut reach_nontriv: Vec<HashSet<Vec<Elem>>> = vec![HashSet::new(); n + 1];
        reach_any[n].insert(vec![0 as Elem; r]);
        for j in (0..n).rev() {
            let mut any = HashSet::new();
            let mut nontriv = HashSet::new();
            for x in field.elements() {
                let c = self.contrib(field, j, x);
                for s in &reach_any[j + 1] {
                    let t: Vec<Elem> = c.iter().zip(s).map(|(&a, &b)| field.add(a, b)).collect();
                    if x != 0 {
                        nontriv.insert(t.clone());
                    }
                    any.insert(t);
                }
                if x == 0 {
                    for s in &reach_nontriv[j + 1] {
                        let t: Vec<Elem> = c.iter().zip(s).map(|(&a, &b)| field.add(a, b)).collect();
                        nontriv.insert(t);
                    }
                }
            }
            reach_any[j] = any;
            reach_nontriv[j] = nontriv;
        }
        let zero_tuple = vec![0 as Elem; r];
        if !reach_nontriv[0].contains(&zero_tuple) {
            return Ok(None);
        }
        // DFS enumeration of solutions in the fixed order
        let mut used: u64 = 0;
        let mut stack: Vec<(Vec<Elem>, Vec<Elem>, bool)> = vec![(Vec::new(), zero_tuple.clone(), false)];
        // each frame: (chosen prefix, needed suffix tuple, nontrivial yet)
        let mut next_val: Vec<Elem> = vec![0];
        while let Some((prefix, need, nontriv)) = stack.last().cloned() {
            let j = prefix.len();
            if j == n {
                used += 1;
                if used > budget.tries {
                    return Err(Error::budget("diagonal system solution filter"));
                }
                if nontriv && accept(&prefix) {
                    return Ok(Some(prefix));
                }
                stack.pop();
                next_val.pop();
                continue;
            }
            let start = *next_val.last().unwrap();
            let mut advanced = false;
            for x in start..field.q() as Elem {
                let c = self.contrib(field, j, x);
                let rest: Vec<Elem> = need.iter().zip(&c).map(|(&a, &b)| field.sub(a, b)).collect();
                let feasible = if nontriv || x != 0 {
                    reach_any[j + 1].contains(&rest)
                } else {
                    reach_nontriv[j + 1].contains(&rest)
                };
                if feasible {
                    *next_val.last_mut().unwrap() = x + 1;
                    let mut p = prefix.clone();
                    p.push(x);
                    stack.push((p, rest, nontriv || x != 0));
                    next_val.push(0);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                stack.pop();
                next_val.pop();
            }
        }
        Ok(None)
    }
}

/// Find a nonzero point where every `conditions` form vanishes and every
/// `nonvanish` form is nonzero, deterministically.
pub fn find_point(
    field: &FqField,
    nvars: usize,
    conditions: &[Form],
    nonvanish: &[Form],
    budget: &Budget,
) -> Result<Vec<Elem>> {
    find_point_where(field, nvars, conditions, nonvanish, budget, |_| true)
}

/// `find_point` with an opaque extra acceptance predicate, evaluated on
/// the candidate in the full `nvars` coordinates. The predicate must be
/// deterministic for the search to stay reproducible.
pub fn find_point_where(
    field: &FqField,
    nvars: usize,
    conditions: &[Form],
    nonvanish: &[Form],
    budget: &Budget,
    mut extra: impl FnMut(&[Elem]) -> bool,
) -> Result<Vec<Elem>> {
    if nvars == 0 {
        return Err(Error::NoSolutionFound);
    }
    if nonvanish.iter().any(|g| g.is_zero()) {
        return Err(Error::NoSolutionFound);
    }
    let active: Vec<&Form> = conditions.iter().filter(|f| !f.is_zero()).collect();
    // eliminate linear conditions exactly
    let linear: Vec<Vec<Elem>> = active
        .iter()
        .filter(|f| f.degree() == 1)
        .map(|f| {
            let mut row = vec![0 as Elem; nvars];
            for (exp, &c) in f.terms() {
                let i = exp.iter().position(|&e| e > 0).expect("degree-1 term");
                row[i] = c;
            }
            row
        })
        .collect();
    let higher: Vec<&Form> = active.iter().filter(|f| f.degree() > 1).copied().collect();
    if linear.is_empty() && higher.is_empty() && nonvanish.is_empty() {
        let mut v = vec![0 as Elem; nvars];
        v[0] = 1;
        if extra(&v) {
            return Ok(v);
        }
    }
    let (kernel, dim) = if linear.is_empty() {
        (None, nvars)
    } else {
        let ker = linalg::kernel_basis(field, &linear, nvars);
        if ker.is_empty() {
            return Err(Error::NoSolutionFound);
        }
        let d = ker.len();
        (Some(Subspace::new(field, nvars, ker)?), d)
    };
    let transport = |f: &Form| -> Result<Form> {
        match &kernel {
            Some(k) => f.restrict(field, k),
            None => Ok(f.clone()),
        }
    };
    let conds: Vec<Form> = higher.iter().map(|f| transport(f)).collect::<Result<_>>()?;
    let nonv: Vec<Form> = nonvanish.iter().map(transport).collect::<Result<_>>()?;
    if nonv.iter().any(|g| g.is_zero()) {
        // a required-nonzero form vanished on the kernel
        return Err(Error::NoSolutionFound);
    }
    let to_ambient = |coords: &[Elem]| -> Vec<Elem> {
        match &kernel {
            Some(k) => k.to_ambient(field, coords),
            None => coords.to_vec(),
        }
    };
    let mut filter = |v: &[Elem]| -> bool {
        nonv.iter().all(|g| g.eval(field, v) != 0) && extra(&to_ambient(v))
    };
    // complete diagonal route when all residual conditions are diagonal
    let live: Vec<Form> = conds.iter().filter(|f| !f.is_zero()).cloned().collect();
    if !live.is_empty() {
        if let Some(sys) = DiagonalSystem::recognize(&live) {
            // solvability of the bare conditions first (cheap and
            // complete); its witness may already pass the filter
            match sys.solve(field, budget, |_| true)? {
                None => return Err(Error::NoSolutionFound),
                Some(v) if filter(&v) => return Ok(to_ambient(&v)),
                Some(_) => {}
            }
            // the DP enumeration order starves conditions on early
            // coordinates, so prefer the small-support sweep and keep the
            // filtered DP as a last resort
            let full = |v: &[Elem]| conds.iter().all(|f| f.eval(field, v) == 0) && filter(v);
            match structured_sweep(field, dim, budget, full) {
                Sweep::Found(v) => return Ok(to_ambient(&v)),
                Sweep::Exhausted => return Err(Error::NoSolutionFound),
                Sweep::OutOfBudget => {}
            }
            return match sys.solve(field, budget, &mut filter)? {
                Some(v) => Ok(to_ambient(&v)),
                None => Err(Error::NoSolutionFound),
            };
        }
    }
    let full = |v: &[Elem]| conds.iter().all(|f| f.eval(field, v) == 0) && filter(v);
    match structured_sweep(field, dim, budget, full) {
        Sweep::Found(v) => Ok(to_ambient(&v)),
        Sweep::Exhausted => Err(Error::NoSolutionFound),
        Sweep::OutOfBudget => Err(Error::budget("structured point sweep")),
    }
}

/// Find a nonzero ambient point, independent from `avoid`, where the
/// ambient `conditions` vanish and the ambient `nonvanish` forms do not:
/// the search runs inside a complement of `avoid`, which makes linear
/// independence from `avoid` automatic.
pub fn find_in_complement(
    field: &FqField,
    nvars: usize,
    avoid: &[Vec<Elem>],
    conditions: &[Form],
    nonvanish: &[Form],
    budget: &Budget,
    extra: impl FnMut(&[Elem]) -> bool,
) -> Result<Vec<Elem>> {
    let comp = if avoid.is_empty() {
        Subspace::full(nvars)
    } else {
        let basis = linalg::complement_basis(field, avoid, nvars);
        if basis.is_empty() {
            return Err(Error::NoSolutionFound);
        }
        Subspace::new(field, nvars, basis)?
    };
    let conds: Vec<Form> = conditions
        .iter()
        .map(|f| f.restrict(field, &comp))
        .collect::<Result<_>>()?;
    let nonv: Vec<Form> = nonvanish
        .iter()
        .map(|f| f.restrict(field, &comp))
        .collect::<Result<_>>()?;
    let mut extra = extra;
    let coords = find_point_where(field, comp.dim(), &conds, &nonv, budget, |c| {
        extra(&comp.to_ambient(field, c))
    })?;
    Ok(comp.to_ambient(field, &coords))
}
