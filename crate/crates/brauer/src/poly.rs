//! Sparse homogeneous multivariate polynomials, multi-degrees, subspaces,
//! and the structural operators: restriction (pullback), plane
//! coefficients, and the D / D₂ bi-degree extractions.
//!
//! A `Form` is a map from exponent vectors (fixed width `nvars`, entries
//! summing to `degree`) to nonzero coefficients, held in a sorted map so
//! equality and serialization are canonical. The zero form of any degree
//! has an empty term map.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Elem, FqField};
use crate::linalg;

/// A non-increasing tuple of degrees with the lexicographic well-order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(entries: Vec<u32>) -> Result<MultiDegree> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::DimensionMismatch("multi-degree must be non-increasing".into()));
        }
        if entries.iter().any(|&d| d == 0) {
            return Err(Error::DimensionMismatch("multi-degree entries must be >= 1".into()));
        }
        Ok(MultiDegree(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// A homogeneous polynomial in `nvars` variables of the given degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u8>, Elem>,
}

impl Form {
    /// The zero form of a given degree.
    pub fn zero(nvars: usize, degree: u32) -> Form {
        Form { nvars, degree, terms: BTreeMap::new() }
    }

    /// Build from terms; zero coefficients dropped, homogeneity enforced.
    pub fn new(nvars: usize, degree: u32, terms: impl IntoIterator<Item = (Vec<u8>, Elem)>) -> Result<Form> {
        let mut map = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of width {} in a form on {} variables",
                    exp.len(),
                    nvars
                )));
            }
            if exp.iter().map(|&e| e as u32).sum::<u32>() != degree {
                return Err(Error::DimensionMismatch(format!(
                    "non-homogeneous term in a degree-{degree} form"
                )));
            }
            if c != 0 {
                map.insert(exp, c);
            }
        }
        Ok(Form { nvars, degree, terms: map })
    }

    /// The monomial `c * x_i^degree`.
    pub fn power_monomial(nvars: usize, degree: u32, i: usize, c: Elem) -> Form {
        let mut exp = vec![0u8; nvars];
        exp[i] = degree as u8;
        Form::new(nvars, degree, [(exp, c)]).expect("well-formed monomial")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u8]) -> Elem {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    fn insert_add(&mut self, field: &FqField, exp: Vec<u8>, c: Elem) {
        if c == 0 {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, field: &FqField, other: &Form) -> Result<Form> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::DimensionMismatch("form addition needs equal nvars and degree".into()));
        }
        let mut out = self.clone();
        for (exp, &c) in other.terms() {
            out.insert_add(field, exp.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, field: &FqField, other: &Form) -> Result<Form> {
        self.add(field, &other.scale(field, field.minus_one()))
    }

    pub fn scale(&self, field: &FqField, c: Elem) -> Form {
        if c == 0 {
            return Form::zero(self.nvars, self.degree);
        }
        let terms = self.terms.iter().map(|(e, &a)| (e.clone(), field.mul(a, c)));
        Form { nvars: self.nvars, degree: self.degree, terms: terms.collect() }
    }

    pub fn mul(&self, field: &FqField, other: &Form) -> Result<Form> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch("form product needs equal nvars".into()));
        }
        let mut out = Form::zero(self.nvars, self.degree + other.degree);
        for (e1, &c1) in self.terms() {
            for (e2, &c2) in other.terms() {
                let exp: Vec<u8> = e1.iter().zip(e2).map(|(&a, &b)| a + b).collect();
                out.insert_add(field, exp, field.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn eval(&self, field: &FqField, point: &[Elem]) -> Elem {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = field.zero();
        for (exp, &c) in self.terms() {
            let mut t = c;
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    t = field.mul(t, field.pow(point[i], e as u32));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Substitute `x_j := subs[j]`, each a degree-1 form in a common new
    /// variable set. The result is homogeneous of the same degree.
    pub fn compose_linear(&self, field: &FqField, subs: &[Form]) -> Result<Form> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch("one substitution per variable required".into()));
        }
        let new_vars = subs.first().map_or(0, |s| s.nvars());
        for s in subs {
            if s.degree() != 1 || s.nvars() != new_vars {
                return Err(Error::DimensionMismatch("substitutions must be linear in a common variable set".into()));
            }
        }
        let one = Form::new(new_vars, 0, [(vec![0u8; new_vars], 1)])?;
        let mut out = Form::zero(new_vars, self.degree);
        for (exp, &c) in self.terms() {
            let mut prod = one.scale(field, c);
            for (j, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    prod = prod.mul(field, &subs[j])?;
                }
            }
            out = out.add(field, &prod)?;
        }
        Ok(out)
    }

    /// Pullback along the embedding of `w`: the form in `dim(w)` variables
    /// sending `t` to `f(sum_i t_i * basis_i)`.
    pub fn restrict(&self, field: &FqField, w: &Subspace) -> Result<Form> {
        if w.ambient_dim() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "restricting a form on {} variables to a subspace of ambient dimension {}",
                self.nvars,
                w.ambient_dim()
            )));
        }
        let m = w.dim();
        let subs: Vec<Form> = (0..self.nvars)
            .map(|j| {
                let terms = (0..m).filter_map(|i| {
                    let c = w.basis()[i][j];
                    (c != 0).then(|| {
                        let mut exp = vec![0u8; m];
                        exp[i] = 1;
                        (exp, c)
                    })
                });
                Form::new(m, 1, terms)
            })
            .collect::<Result<_>>()?;
        self.compose_linear(field, &subs)
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, field: &FqField, var: usize) -> Form {
        assert!(self.degree >= 1);
        let mut out = Form::zero(self.nvars, self.degree - 1);
        for (exp, &c) in self.terms() {
            if exp[var] == 0 {
                continue;
            }
            let mut e = exp.clone();
            let k = field.from_int(e[var] as u64);
            e[var] -= 1;
            out.insert_add(field, e, field.mul(c, k));
        }
        out
    }

    /// Lex-leading term (greatest exponent vector), if nonzero.
    fn leading(&self) -> Option<(&Vec<u8>, Elem)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    /// Rename into a larger variable set: variable `j` becomes variable
    /// `offset + j` of `new_nvars` variables.
    pub fn embed(&self, offset: usize, new_nvars: usize) -> Result<Form> {
        if offset + self.nvars > new_nvars {
            return Err(Error::DimensionMismatch("embedding exceeds target variable count".into()));
        }
        let terms = self.terms.iter().map(|(e, &c)| {
            let mut exp = vec![0u8; new_nvars];
            exp[offset..offset + self.nvars].copy_from_slice(e);
            (exp, c)
        });
        Form::new(new_nvars, self.degree, terms)
    }
}

/// Exact quotient `f / g` if `g` divides `f`, by lex long division.
/// Over a field the lex-leading term is multiplicative, so failure of a
/// leading-term division step proves indivisibility.
pub fn divide_exact(field: &FqField, f: &Form, g: &Form) -> Option<Form> {
    if g.is_zero() || f.nvars() != g.nvars() || f.degree() < g.degree() {
        return if f.is_zero() { Some(Form::zero(f.nvars(), 0)) } else { None };
    }
    let (glead, gc) = {
        let (e, c) = g.leading()?;
        (e.clone(), c)
    };
    let mut rem = f.clone();
    let mut quot = Form::zero(f.nvars(), f.degree() - g.degree());
    while let Some((rlead, rc)) = rem.leading() {
        if rlead.iter().zip(&glead).any(|(&a, &b)| a < b) {
            return None;
        }
        let qexp: Vec<u8> = rlead.iter().zip(&glead).map(|(&a, &b)| a - b).collect();
        let qc = field.div(rc, gc);
        let qterm = Form::new(f.nvars(), quot.degree(), [(qexp, qc)]).ok()?;
        quot = quot.add(field, &qterm).ok()?;
        rem = rem.sub(field, &qterm.mul(field, g).ok()?).ok()?;
    }
    Some(quot)
}

/// Coefficients `c_0..c_d` of `f(xv + yw) = sum_e c_e x^e y^{d-e}`.
pub fn plane_coeffs(field: &FqField, f: &Form, v: &[Elem], w: &[Elem]) -> Result<Vec<Elem>> {
    if !linalg::is_independent(field, &[v.to_vec(), w.to_vec()]) {
        return Err(Error::DependentVectors);
    }
    let plane = Subspace::new(field, f.nvars(), vec![v.to_vec(), w.to_vec()])?;
    let g = f.restrict(field, &plane)?;
    let d = f.degree();
    let mut c = vec![0 as Elem; d as usize + 1];
    for (exp, &coef) in g.terms() {
        c[exp[0] as usize] = coef;
    }
    // sanity identities: c_d = f(v), c_0 = f(w), sum c_e = f(v + w)
    debug_assert_eq!(c[d as usize], f.eval(field, v));
    debug_assert_eq!(c[0], f.eval(field, w));
    debug_assert_eq!(
        c.iter().fold(field.zero(), |acc, &x| field.add(acc, x)),
        f.eval(field, &v.iter().zip(w).map(|(&a, &b)| field.add(a, b)).collect::<Vec<_>>())
    );
    Ok(c)
}

/// The bi-degree `(k, d-k)` piece of `f(v + w)` on the doubled variable
/// set: variables `0..n` are the `v` block, `n..2n` the `w` block.
pub fn bidegree_piece(field: &FqField, f: &Form, k: u32) -> Form {
    let n = f.nvars();
    let subs: Vec<Form> = (0..n)
        .map(|j| {
            let mut ev = vec![0u8; 2 * n];
            ev[j] = 1;
            let mut ew = vec![0u8; 2 * n];
            ew[n + j] = 1;
            Form::new(2 * n, 1, [(ev, 1), (ew, 1)]).expect("doubling substitution")
        })
        .collect();
    let expanded = f.compose_linear(field, &subs).expect("compose on doubled variables");
    let keep = expanded
        .terms()
        .filter(|(exp, _)| exp[..n].iter().map(|&e| e as u32).sum::<u32>() == k)
        .map(|(e, &c)| (e.clone(), c));
    Form::new(2 * n, f.degree(), keep).expect("filtered piece stays homogeneous")
}

/// `Df`: the bi-degree `(1, d-1)` piece of `f(v + w)`.
pub fn d_operator(field: &FqField, f: &Form) -> Form {
    assert!(f.degree() >= 1);
    bidegree_piece(field, f, 1)
}

/// `D₂f`: the bi-degree `(2, d-2)` piece of `f(v + w)`.
pub fn d2_operator(field: &FqField, f: &Form) -> Form {
    assert!(f.degree() >= 2);
    bidegree_piece(field, f, 2)
}

/// Evaluate the first block of a doubled-variable form at the fixed
/// vector `v`, leaving a form in the second-block variables.
pub fn partial_eval_first(field: &FqField, g: &Form, v: &[Elem]) -> Form {
    let n = v.len();
    assert_eq!(g.nvars(), 2 * n);
    let mut out = Form::zero(n, 0);
    let mut degree_set = false;
    for (exp, &c) in g.terms() {
        let mut coef = c;
        for (i, &vi) in v.iter().enumerate() {
            if exp[i] > 0 {
                coef = field.mul(coef, field.pow(vi, exp[i] as u32));
            }
        }
        if coef == 0 {
            continue;
        }
        let tail: Vec<u8> = exp[n..].to_vec();
        let deg = tail.iter().map(|&e| e as u32).sum::<u32>();
        if !degree_set {
            out = Form::zero(n, deg);
            degree_set = true;
        }
        assert_eq!(deg, out.degree(), "mixed second-block degrees in partial evaluation");
        out.insert_add(field, tail, coef);
    }
    out
}

/// Evaluate a doubled-variable form (such as `Df`) at the pair `(v, w)`.
pub fn eval_pair(field: &FqField, g: &Form, v: &[Elem], w: &[Elem]) -> Elem {
    let mut point = v.to_vec();
    point.extend_from_slice(w);
    g.eval(field, &point)
}

/// An ordered tuple of forms on a common variable set, degrees
/// non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormTuple {
    forms: Vec<Form>,
    nvars: usize,
}

impl FormTuple {
    /// Construct; forms are stably sorted into non-increasing degree order.
    pub fn new(nvars: usize, mut forms: Vec<Form>) -> Result<FormTuple> {
        if forms.iter().any(|f| f.nvars() != nvars) {
            return Err(Error::DimensionMismatch("all forms in a tuple must share nvars".into()));
        }
        if forms.iter().any(|f| f.degree() == 0) {
            return Err(Error::DimensionMismatch("degree-0 forms are not allowed in tuples".into()));
        }
        forms.sort_by(|a, b| b.degree().cmp(&a.degree()));
        Ok(FormTuple { forms, nvars })
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn multidegree(&self) -> MultiDegree {
        MultiDegree::new(self.forms.iter().map(|f| f.degree()).collect())
            .expect("tuple degrees are sorted non-increasing")
    }

    pub fn restrict(&self, field: &FqField, w: &Subspace) -> Result<FormTuple> {
        let forms = self
            .forms
            .iter()
            .map(|f| f.restrict(field, w))
            .collect::<Result<Vec<_>>>()?;
        FormTuple::new(w.dim(), forms)
    }

    /// Whether the point annihilates every form.
    pub fn vanishes_at(&self, field: &FqField, point: &[Elem]) -> bool {
        self.forms.iter().all(|f| f.eval(field, point) == 0)
    }
}

/// An ordered independent basis spanning a linear subspace of `F_q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Elem>>,
}

impl Subspace {
    pub fn new(field: &FqField, ambient_dim: usize, basis: Vec<Vec<Elem>>) -> Result<Subspace> {
        if basis.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch("basis vector length differs from ambient dimension".into()));
        }
        if !linalg::is_independent(field, &basis) {
            return Err(Error::DependentVectors);
        }
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn empty(ambient_dim: usize) -> Subspace {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Subspace {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![0 as Elem; ambient_dim];
                v[i] = 1;
                v
            })
            .collect();
        Subspace { ambient_dim, basis }
    }

    pub fn span_of(field: &FqField, ambient_dim: usize, vecs: &[Vec<Elem>]) -> Subspace {
        let mut basis: Vec<Vec<Elem>> = Vec::new();
        for v in vecs {
            if !linalg::in_span(field, &basis, v) {
                basis.push(v.clone());
            }
        }
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn contains(&self, field: &FqField, v: &[Elem]) -> bool {
        linalg::in_span(field, &self.basis, v)
    }

    /// Map coordinates in this subspace to the ambient point.
    pub fn to_ambient(&self, field: &FqField, coords: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(coords.len(), self.dim());
        let mut out = vec![0 as Elem; self.ambient_dim];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, &x) in out.iter_mut().zip(b) {
                *o = field.add(*o, field.mul(*c, x));
            }
        }
        out
    }

    /// Direct sum with another subspace (bases concatenated, in order).
    pub fn direct_sum(&self, field: &FqField, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch("direct sum needs a common ambient space".into()));
        }
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        Subspace::new(field, self.ambient_dim, basis)
    }
}

/// All exponent vectors of width `nvars` summing to `degree`, ascending in
/// the map order used by `Form`.
pub fn exponents(nvars: usize, degree: u32) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; nvars];
    fn rec(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, i: usize, rem: u32) {
        if i + 1 == cur.len() {
            cur[i] = rem as u8;
            out.push(cur.clone());
            return;
        }
        for e in 0..=rem {
            cur[i] = e as u8;
            rec(out, cur, i + 1, rem - e);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if degree == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(&mut out, &mut cur, 0, degree);
    out.sort();
    out
}

/// A general (not necessarily homogeneous) sparse polynomial, used for
/// expression bookkeeping when forms are rewritten in terms of other
/// forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, Elem>,
}

impl GenPoly {
    pub fn zero(nvars: usize) -> GenPoly {
        GenPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (Vec<u8>, Elem)>) -> Result<GenPoly> {
        let mut map = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of width {} in a polynomial on {} variables",
                    exp.len(),
                    nvars
                )));
            }
            if c != 0 {
                map.insert(exp, c);
            }
        }
        Ok(GenPoly { nvars, terms: map })
    }

    pub fn constant(nvars: usize, c: Elem) -> GenPoly {
        GenPoly::new(nvars, [(vec![0u8; nvars], c)]).expect("constant")
    }

    pub fn var(nvars: usize, i: usize) -> GenPoly {
        let mut exp = vec![0u8; nvars];
        exp[i] = 1;
        GenPoly::new(nvars, [(exp, 1)]).expect("variable")
    }

    pub fn from_form(f: &Form) -> GenPoly {
        GenPoly { nvars: f.nvars(), terms: f.terms.clone() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Elem)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Elem {
        self.terms.get(&vec![0u8; self.nvars]).copied().unwrap_or(0)
    }

    pub fn add(&self, field: &FqField, other: &GenPoly) -> GenPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (exp, &c) in &other.terms {
            let entry = terms.entry(exp.clone()).or_insert(0);
            *entry = field.add(*entry, c);
            if *entry == 0 {
                terms.remove(exp);
            }
        }
        GenPoly { nvars: self.nvars, terms }
    }

    pub fn sub(&self, field: &FqField, other: &GenPoly) -> GenPoly {
        self.add(field, &other.scale(field, field.minus_one()))
    }

    pub fn scale(&self, field: &FqField, c: Elem) -> GenPoly {
        if c == 0 {
            return GenPoly::zero(self.nvars);
        }
        GenPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &x)| (e.clone(), field.mul(x, c))).collect(),
        }
    }

    pub fn mul(&self, field: &FqField, other: &GenPoly) -> GenPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = GenPoly::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let exp: Vec<u8> = ea
                    .iter()
                    .zip(eb)
                    .map(|(&x, &y)| x.checked_add(y).expect("exponent overflow"))
                    .collect();
                let entry = out.terms.entry(exp.clone()).or_insert(0);
                *entry = field.add(*entry, field.mul(ca, cb));
                if *entry == 0 {
                    out.terms.remove(&exp);
                }
            }
        }
        out
    }

    pub fn eval(&self, field: &FqField, point: &[Elem]) -> Elem {
        let mut acc = 0 as Elem;
        for (exp, &c) in &self.terms {
            let mut t = c;
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    t = field.mul(t, field.pow(point[i], e as u32));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Substitute a polynomial for every variable.
    pub fn substitute(&self, field: &FqField, args: &[GenPoly]) -> GenPoly {
        assert_eq!(args.len(), self.nvars);
        let out_nvars = args.first().map_or(0, |g| g.nvars);
        let mut acc = GenPoly::zero(out_nvars);
        for (exp, &c) in &self.terms {
            let mut t = GenPoly::constant(out_nvars, c);
            for (i, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(field, &args[i]);
                }
            }
            acc = acc.add(field, &t);
        }
        acc
    }

    /// Substitute forms for the variables, producing a polynomial in the
    /// forms' ambient variables.
    pub fn substitute_forms(&self, field: &FqField, gs: &[Form]) -> GenPoly {
        let args: Vec<GenPoly> = gs.iter().map(GenPoly::from_form).collect();
        self.substitute(field, &args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FqField {
        FqField::new(3, 1).unwrap()
    }

    fn sum_of_squares(field: &FqField, n: usize) -> Form {
        let mut f = Form::zero(n, 2);
        for i in 0..n {
            f = f.add(field, &Form::power_monomial(n, 2, i, 1)).unwrap();
        }
        f
    }

    #[test]
    fn restrict_to_diagonal_line() {
        let k = f3();
        let f = sum_of_squares(&k, 2);
        let w = Subspace::new(&k, 2, vec![vec![1, 1]]).unwrap();
        let g = f.restrict(&k, &w).unwrap();
        assert_eq!(g, Form::power_monomial(1, 2, 0, 2));
    }

    #[test]
    fn restrict_identity() {
        let k = f3();
        let f = sum_of_squares(&k, 3);
        let g = f.restrict(&k, &Subspace::full(3)).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn plane_coeffs_monomials() {
        let k = FqField::new(5, 1).unwrap();
        // f = x y^{d-1} on the standard plane: c_1 = 1
        let d = 4u32;
        let f = Form::new(2, d, [(vec![1, (d - 1) as u8], 1)]).unwrap();
        let c = plane_coeffs(&k, &f, &[1, 0], &[0, 1]).unwrap();
        let mut expect = vec![0; d as usize + 1];
        expect[1] = 1;
        assert_eq!(c, expect);
        // f = y^d with w the second basis vector: c_0 = 1 only
        let f = Form::power_monomial(2, d, 1, 1);
        let c = plane_coeffs(&k, &f, &[1, 0], &[0, 1]).unwrap();
        let mut expect = vec![0; d as usize + 1];
        expect[0] = 1;
        assert_eq!(c, expect);
    }

    #[test]
    fn plane_coeffs_rejects_dependent() {
        let k = f3();
        let f = sum_of_squares(&k, 2);
        assert!(matches!(
            plane_coeffs(&k, &f, &[1, 1], &[2, 2]),
            Err(Error::DependentVectors)
        ));
    }

    #[test]
    fn d_operator_square() {
        let k = FqField::new(5, 1).unwrap();
        let f = Form::power_monomial(1, 2, 0, 1);
        let df = d_operator(&k, &f);
        // 2 v w
        let expect = Form::new(2, 2, [(vec![1, 1], 2)]).unwrap();
        assert_eq!(df, expect);
    }

    #[test]
    fn d_operator_frobenius_kills() {
        let k = f3();
        let f = Form::power_monomial(1, 3, 0, 1);
        assert!(d_operator(&k, &f).is_zero());
    }

    #[test]
    fn d2_binomial() {
        let k = FqField::new(7, 1).unwrap();
        let f = Form::power_monomial(1, 4, 0, 1);
        let d2 = d2_operator(&k, &f);
        let expect = Form::new(2, 4, [(vec![2, 2], 6)]).unwrap();
        assert_eq!(d2, expect);
    }

    #[test]
    fn multidegree_order() {
        let a = MultiDegree::new(vec![3, 2]).unwrap();
        let b = MultiDegree::new(vec![3]).unwrap();
        let c = MultiDegree::new(vec![2, 2, 2]).unwrap();
        assert!(a > b);
        assert!(b > c);
        assert!(MultiDegree::new(vec![2, 3]).is_err());
    }

    #[test]
    fn tuple_sorts_by_degree() {
        let k = f3();
        let f2 = sum_of_squares(&k, 3);
        let f3deg = Form::power_monomial(3, 3, 0, 1);
        let t = FormTuple::new(3, vec![f2.clone(), f3deg.clone()]).unwrap();
        assert_eq!(t.multidegree(), MultiDegree::new(vec![3, 2]).unwrap());
        assert_eq!(t.forms()[0], f3deg);
    }

    #[test]
    fn exponents_count() {
        // C(4+2-1, 2) = 10 monomials of degree 2 in 4 variables
        assert_eq!(exponents(4, 2).len(), 10);
        for e in exponents(3, 4) {
            assert_eq!(e.iter().map(|&x| x as u32).sum::<u32>(), 4);
        }
    }

    #[test]
    fn restrict_functorial() {
        let k = FqField::new(5, 1).unwrap();
        let f = sum_of_squares(&k, 4);
        let w = Subspace::new(&k, 4, vec![vec![1, 2, 0, 0], vec![0, 0, 1, 3], vec![1, 0, 1, 0]]).unwrap();
        let inner = Subspace::new(&k, 3, vec![vec![1, 1, 0], vec![0, 2, 1]]).unwrap();
        // composite embedding
        let composite: Vec<Vec<Elem>> = inner.basis().iter().map(|c| w.to_ambient(&k, c)).collect();
        let wc = Subspace::new(&k, 4, composite).unwrap();
        let two_step = f.restrict(&k, &w).unwrap().restrict(&k, &inner).unwrap();
        let one_step = f.restrict(&k, &wc).unwrap();
        assert_eq!(two_step, one_step);
    }
}
