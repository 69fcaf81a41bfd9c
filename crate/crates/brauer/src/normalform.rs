//! The normal-form pipeline: small non-vanishing sections, the normal
//! form `W` assembled from good subspaces, the rational chart on
//! `Z ∩ W`, dense-point generation, regularization of low-strength
//! tuples, and the closure-codimension driver.
//!
//! Density over a finite field is reinterpreted as a verifiable
//! non-containment statement: for every bounded-degree test form that is
//! nonzero somewhere on `Z ∩ W`, some generated point must make it
//! nonzero. The oracle module checks that statement extensionally.

use crate::budget::Budget;
use crate::cert::{CertBuilder, Certificate, ClaimKind};
use crate::error::{Error, Result};
use crate::field::{Elem, FqField};
use crate::ortho::{good_subspace, GoodFormWitness};
use crate::poly::{Form, FormTuple, GenPoly, MultiDegree, Subspace};
use crate::solver::find_point;
use crate::strength::{strength_exhaustive, StrengthKind, StrengthValue};
use crate::text;

/// The constant-one form, usable as a trivial non-vanishing target.
pub fn one(nvars: usize) -> Form {
    Form::new(nvars, 0, [(vec![0u8; nvars], 1)]).expect("constant one")
}

/// The normal form: a subspace `W` with labeled coordinates
/// `(x_i, y_i, z_i)` for each block `i <= r` and trailing `(w_j)` for
/// `j <= m`, such that `f_i` restricted to `W` is exactly
/// `x_i y_i^{d_i-1} + a_i y_i^{d_i} + b_i z_i^{d_i} + h_i` with `h_i`
/// supported on the variables after block `i`.
#[derive(Debug, Clone)]
pub struct NormalFormData {
    pub w: Subspace,
    pub degrees: Vec<u32>,
    pub a: Vec<Elem>,
    pub b: Vec<Elem>,
    /// Residual forms in the `3r + m` coordinates of `W`, fully expanded.
    pub h: Vec<Form>,
    /// An ambient point of `Z ∩ W` where the non-vanishing target is
    /// nonzero.
    pub witness: Vec<Elem>,
}

impl NormalFormData {
    pub fn r(&self) -> usize {
        self.degrees.len()
    }

    pub fn m(&self) -> usize {
        self.w.dim() - 3 * self.r()
    }

    /// The expected restriction of `f_{i+1}` to `W`, template head plus
    /// residual.
    pub fn template(&self, field: &FqField, i: usize) -> Form {
        let wd = self.w.dim();
        let d = self.degrees[i];
        let mut head = Vec::new();
        let mut e = vec![0u8; wd];
        e[3 * i] = 1;
        e[3 * i + 1] = (d - 1) as u8;
        head.push((e, 1));
        if self.a[i] != 0 {
            let mut e = vec![0u8; wd];
            e[3 * i + 1] = d as u8;
            head.push((e, self.a[i]));
        }
        let mut e = vec![0u8; wd];
        e[3 * i + 2] = d as u8;
        head.push((e, self.b[i]));
        let head = Form::new(wd, d, head).expect("template head");
        head.add(field, &self.h[i]).expect("template")
    }

    /// Exact replay of the defining invariants.
    pub fn verify(&self, field: &FqField, ft: &FormTuple) -> bool {
        let r = self.r();
        if ft.len() != r || self.a.len() != r || self.b.len() != r || self.h.len() != r {
            return false;
        }
        if self.b.iter().any(|&b| b == 0) {
            return false;
        }
        for i in 0..r {
            // residual supported strictly after block i
            for (exp, _) in self.h[i].terms() {
                if exp[..3 * (i + 1)].iter().any(|&e| e > 0) {
                    return false;
                }
            }
            let rest = match ft.forms()[i].restrict(field, &self.w) {
                Ok(f) => f,
                Err(_) => return false,
            };
            if rest != self.template(field, i) {
                return false;
            }
        }
        true
    }

    /// The minimal-weight part of `f_{i+1}|_W` under the weight vector
    /// giving block `t` weight `t+1` and trailing variables weight
    /// `r+1`.
    pub fn omega_initial(&self, field: &FqField, ft: &FormTuple, i: usize) -> Form {
        let r = self.r();
        let wd = self.w.dim();
        let weight = |j: usize| -> u64 { if j < 3 * r { (j / 3) as u64 + 1 } else { r as u64 + 1 } };
        let rest = ft.forms()[i].restrict(field, &self.w).expect("restriction");
        let term_weight = |exp: &[u8]| -> u64 {
            exp.iter().enumerate().map(|(j, &e)| weight(j) * e as u64).sum()
        };
        let min_w = rest.terms().map(|(e, _)| term_weight(e)).min().unwrap_or(0);
        Form::new(
            wd,
            rest.degree(),
            rest.terms()
                .filter(|(e, _)| term_weight(e) == min_w)
                .map(|(e, &c)| (e.clone(), c)),
        )
        .expect("initial part")
    }

    /// The bare template head (without the residual), for comparison with
    /// `omega_initial`.
    pub fn omega_head(&self, field: &FqField, i: usize) -> Form {
        self.template(field, i).sub(field, &self.h[i]).expect("head")
    }
}

/// A subspace `F` of dimension at most `r + 1` containing a point of
/// `Z(ft)` where `g` is nonzero; the witness point is returned alongside.
pub fn nonvanishing_section(
    field: &FqField,
    ft: &FormTuple,
    g: &Form,
    budget: &Budget,
) -> Result<(Subspace, Vec<Elem>)> {
    let n = ft.nvars();
    if g.degree() == 0 {
        return if g.is_zero() {
            Err(Error::NoWitness)
        } else {
            Ok((Subspace::empty(n), vec![0 as Elem; n]))
        };
    }
    let conds: Vec<Form> = ft.forms().iter().filter(|f| !f.is_zero()).cloned().collect();
    match find_point(field, n, &conds, &[g.clone()], budget) {
        Ok(x) => {
            assert!(ft.vanishes_at(field, &x));
            assert_ne!(g.eval(field, &x), 0);
            let f = Subspace::new(field, n, vec![x.clone()])?;
            assert!(f.dim() <= ft.len() + 1);
            Ok((f, x))
        }
        Err(Error::NoSolutionFound) | Err(Error::NoSolution) => Err(Error::NoWitness),
        Err(e) => Err(e),
    }
}

/// Build the normal form: `F` from `nonvanishing_section`, then good
/// subspaces `E_r, ..., E_1` in descending order, and
/// `W = E_1 ⊕ ... ⊕ E_r ⊕ F`.
pub fn normal_form(field: &FqField, ft: &FormTuple, g: &Form, budget: &Budget) -> Result<NormalFormData> {
    let n = ft.nvars();
    let r = ft.len();
    let (f0, witness) = nonvanishing_section(field, ft, g, budget)?;
    let mut blocks: Vec<Option<GoodFormWitness>> = vec![None; r];
    let mut acc = f0.clone();
    for i in (1..=r).rev() {
        let gw = good_subspace(field, ft, i, &acc, budget).map_err(|e| match e {
            Error::BudgetExceeded { stage } => Error::budget(format!("normal_form block {i}: {stage}")),
            e => e,
        })?;
        acc = acc.direct_sum(field, &gw.e)?;
        blocks[i - 1] = Some(gw);
    }
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    for gw in &blocks {
        basis.extend(gw.as_ref().unwrap().e.basis().iter().cloned());
    }
    basis.extend(f0.basis().iter().cloned());
    let w = Subspace::new(field, n, basis)?;
    let wd = w.dim();
    let mut degrees = Vec::with_capacity(r);
    let mut a = Vec::with_capacity(r);
    let mut b = Vec::with_capacity(r);
    let mut h = Vec::with_capacity(r);
    for i in 0..r {
        let gw = blocks[i].as_ref().unwrap();
        let d = ft.forms()[i].degree();
        degrees.push(d);
        a.push(gw.a);
        b.push(gw.b);
        let rest = ft.forms()[i].restrict(field, &w)?;
        let mut head = vec![{
            let mut e = vec![0u8; wd];
            e[3 * i] = 1;
            e[3 * i + 1] = (d - 1) as u8;
            (e, 1)
        }];
        if gw.a != 0 {
            let mut e = vec![0u8; wd];
            e[3 * i + 1] = d as u8;
            head.push((e, gw.a));
        }
        let mut e = vec![0u8; wd];
        e[3 * i + 2] = d as u8;
        head.push((e, gw.b));
        let head = Form::new(wd, d, head)?;
        let hi = rest.sub(field, &head)?;
        for (exp, _) in hi.terms() {
            assert!(
                exp[..3 * (i + 1)].iter().all(|&e| e == 0),
                "residual must live strictly after its block"
            );
        }
        h.push(hi);
    }
    let nf = NormalFormData { w, degrees, a, b, h, witness };
    assert!(nf.verify(field, ft), "normal form invariants must replay");
    assert!(nf.w.contains(field, &nf.witness));
    for i in 0..r {
        assert_eq!(
            nf.omega_initial(field, ft, i),
            nf.omega_head(field, i),
            "initial form under the weight vector must be the template head"
        );
    }
    Ok(nf)
}

/// The unique chart point over the parameters `(y, z, w)`, or `None` if
/// some `y_i = 0`. The returned point is ambient and lies exactly on
/// `Z ∩ W`.
pub fn chart_point(
    field: &FqField,
    nf: &NormalFormData,
    y: &[Elem],
    z: &[Elem],
    w: &[Elem],
) -> Option<Vec<Elem>> {
    let r = nf.r();
    let m = nf.m();
    assert_eq!(y.len(), r);
    assert_eq!(z.len(), r);
    assert_eq!(w.len(), m);
    if y.iter().any(|&c| c == 0) {
        return None;
    }
    let wd = nf.w.dim();
    let mut c = vec![0 as Elem; wd];
    for i in 0..r {
        c[3 * i + 1] = y[i];
        c[3 * i + 2] = z[i];
    }
    c[3 * r..].copy_from_slice(w);
    // solve for x_i in descending block order: the residual h_i only
    // involves coordinates after block i, all of which are already set
    for i in (0..r).rev() {
        let d = nf.degrees[i];
        let hval = nf.h[i].eval(field, &c);
        let num = field.add(
            field.add(field.mul(nf.a[i], field.pow(y[i], d)), field.mul(nf.b[i], field.pow(z[i], d))),
            hval,
        );
        c[3 * i] = field.neg(field.div(num, field.pow(y[i], d - 1)));
    }
    Some(nf.w.to_ambient(field, &c))
}

/// Sweep the chart parameters in the fixed total order (`w` digits
/// fastest, then `z`, then `y`), emitting each chart point to `accept`.
/// Every emitted point is asserted to satisfy the full system.
/// `Ok(Some(p))` on acceptance, `Ok(None)` when the parameter space is
/// exhausted, `BudgetExceeded` when the try cap is hit first.
pub fn chart_sweep(
    field: &FqField,
    nf: &NormalFormData,
    ft: &FormTuple,
    budget: &Budget,
    mut accept: impl FnMut(&[Elem]) -> bool,
) -> Result<Option<Vec<Elem>>> {
    let r = nf.r();
    let m = nf.m();
    let units: Vec<Elem> = field.units().collect();
    let q = field.q() as usize;
    // mixed-radix odometer: y (base q-1), z (base q), w (base q)
    let radix: Vec<usize> = std::iter::repeat(units.len())
        .take(r)
        .chain(std::iter::repeat(q).take(r + m))
        .collect();
    let mut digits = vec![0usize; 2 * r + m];
    let mut used = 0u64;
    loop {
        used += 1;
        if used > budget.tries {
            return Err(Error::budget("chart parameter sweep"));
        }
        let y: Vec<Elem> = (0..r).map(|i| units[digits[i]]).collect();
        let z: Vec<Elem> = (0..r).map(|i| digits[r + i] as Elem).collect();
        let w: Vec<Elem> = (0..m).map(|j| digits[2 * r + j] as Elem).collect();
        let p = chart_point(field, nf, &y, &z, &w).expect("y is drawn from the units");
        assert!(ft.vanishes_at(field, &p), "chart points must satisfy the system");
        if accept(&p) {
            return Ok(Some(p));
        }
        // increment, last digit fastest
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < radix[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// All chart points, for enumerable parameter spaces.
pub fn all_chart_points(
    field: &FqField,
    nf: &NormalFormData,
    ft: &FormTuple,
    budget: &Budget,
) -> Result<Vec<Vec<Elem>>> {
    let mut out = Vec::new();
    let found = chart_sweep(field, nf, ft, budget, |p| {
        out.push(p.to_vec());
        false
    })?;
    debug_assert!(found.is_none());
    Ok(out)
}

fn dense_point_certificate(
    field: &FqField,
    ft: &FormTuple,
    g: &Form,
    point: &[Elem],
) -> Certificate {
    let mut cb = CertBuilder::new(ClaimKind::DensePoint);
    cb.kv("field", field.descriptor());
    cb.kv("nvars", ft.nvars());
    for f in ft.forms() {
        cb.kv("form", text::render_form(field, f));
    }
    cb.kv("g", text::render_form(field, g));
    cb.kv("point", text::render_point(field, point));
    for i in 0..ft.len() {
        cb.check(format!("vanish f{} at point", i + 1));
    }
    cb.check("nonzero g at point");
    cb.finish()
}

/// A point of `Z(ft)` with `g` nonzero: normal form, then chart sweep,
/// falling back to the stored non-vanishing witness when the chart runs
/// out of budget or yields no point with `g` nonzero.
pub fn dense_point(field: &FqField, ft: &FormTuple, g: &Form, budget: &Budget) -> Result<(Vec<Elem>, Certificate)> {
    let point = match normal_form(field, ft, g, budget) {
        Ok(nf) => {
            let hit = match chart_sweep(field, &nf, ft, budget, |p| g.eval(field, p) != 0) {
                Ok(found) => found,
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            hit.unwrap_or(nf.witness)
        }
        Err(Error::BudgetExceeded { .. }) => {
            // the section witness alone already satisfies the claim
            let (_, witness) = nonvanishing_section(field, ft, g, budget)?;
            witness
        }
        Err(e) => return Err(e),
    };
    assert!(ft.vanishes_at(field, &point));
    assert_ne!(g.eval(field, &point), 0);
    Ok((point.clone(), dense_point_certificate(field, ft, g, &point)))
}

/// Threshold map for regularization: strength must strictly exceed
/// `phi(multidegree)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phi {
    Const(usize),
}

impl Phi {
    pub fn value(&self, _md: &MultiDegree) -> usize {
        match self {
            Phi::Const(k) => *k,
        }
    }

    /// Parse `const:K`.
    pub fn parse(s: &str) -> Result<Phi> {
        let rest = s
            .strip_prefix("const:")
            .ok_or_else(|| Error::parse_at(1, 1, format!("unknown phi `{s}`")))?;
        let k = rest
            .parse()
            .map_err(|_| Error::parse_at(1, 7, "phi threshold must be an integer"))?;
        Ok(Phi::Const(k))
    }
}

impl std::fmt::Display for Phi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phi::Const(k) => write!(f, "const:{k}"),
        }
    }
}

/// Output of `regularize`: the high-strength tuple and, for each input
/// form, a polynomial expression over the output tuple's slots.
#[derive(Debug, Clone)]
pub struct Regularized {
    pub tuple: FormTuple,
    pub exprs: Vec<GenPoly>,
}

impl Regularized {
    /// Replay every reconstruction identity by expansion.
    pub fn verify(&self, field: &FqField, ft: &FormTuple) -> bool {
        if self.exprs.len() != ft.len() {
            return false;
        }
        ft.forms().iter().zip(&self.exprs).all(|(f, e)| {
            e.nvars() == self.tuple.len()
                && e.substitute_forms(field, self.tuple.forms()) == GenPoly::from_form(f)
        })
    }
}

/// One same-degree combination with decided strength at most the
/// threshold: its member indices, coefficients, and decomposition pairs.
fn find_weak_combo(
    field: &FqField,
    gs: &[Form],
    threshold: usize,
    budget: &Budget,
) -> Result<Option<(Vec<usize>, Vec<Elem>, Vec<(Form, Form)>)>> {
    let nvars = gs.first().map_or(0, |f| f.nvars());
    let mut degrees: Vec<u32> = gs.iter().map(|f| f.degree()).collect();
    degrees.dedup();
    for &d in &degrees {
        let idxs: Vec<usize> = (0..gs.len()).filter(|&i| gs[i].degree() == d).collect();
        let q = field.q() as u64;
        let total = q
            .checked_pow(idxs.len() as u32)
            .ok_or_else(|| Error::budget("regularize combination scan"))?;
        for code in 1..total {
            let mut lambda = Vec::with_capacity(idxs.len());
            let mut c = code;
            for _ in 0..idxs.len() {
                lambda.push((c % q) as Elem);
                c /= q;
            }
            if *lambda.iter().find(|&&x| x != 0).unwrap() != 1 {
                continue;
            }
            let mut combo = Form::zero(nvars, d);
            for (&l, &i) in lambda.iter().zip(&idxs) {
                combo = combo.add(field, &gs[i].scale(field, l))?;
            }
            let r = strength_exhaustive(field, &combo, budget)?;
            match (r.kind, r.value) {
                (StrengthKind::Exact, StrengthValue::Finite(s)) if s <= threshold => {
                    return Ok(Some((idxs, lambda, r.witness.expect("exact finite strength has a witness"))));
                }
                (StrengthKind::LowerBound, StrengthValue::Finite(s)) if s <= threshold => {
                    return Err(Error::budget("regularize strength decision"));
                }
                _ => {}
            }
        }
    }
    Ok(None)
}

/// Regularize: repeatedly replace a member participating in a weak
/// same-degree combination by the factors of its decomposition, until
/// every nontrivial combination has strength above `phi`. The tuple's
/// multi-degree strictly decreases in the lex well-order at every split,
/// and each input form keeps an explicit expression over the current
/// tuple, verified by expansion after every step.
pub fn regularize(field: &FqField, ft: &FormTuple, phi: &Phi, budget: &Budget) -> Result<Regularized> {
    let n = ft.nvars();
    let r = ft.len();
    let mut gs: Vec<Form> = ft.forms().to_vec();
    let mut exprs: Vec<GenPoly> = (0..r).map(|i| GenPoly::var(r, i)).collect();
    let verify_step = |gs: &[Form], exprs: &[GenPoly]| {
        for (f, e) in ft.forms().iter().zip(exprs) {
            assert_eq!(
                e.substitute_forms(field, gs),
                GenPoly::from_form(f),
                "reconstruction identity must hold after every step"
            );
        }
    };
    loop {
        // drop zero members (their slot substitutes to the zero polynomial)
        while let Some(bz) = gs.iter().position(|f| f.is_zero()) {
            let new_len = gs.len() - 1;
            let sub: Vec<GenPoly> = (0..gs.len())
                .map(|k| {
                    if k == bz {
                        GenPoly::zero(new_len)
                    } else {
                        GenPoly::var(new_len, if k < bz { k } else { k - 1 })
                    }
                })
                .collect();
            gs.remove(bz);
            exprs = exprs.iter().map(|e| e.substitute(field, &sub)).collect();
            verify_step(&gs, &exprs);
        }
        if gs.is_empty() {
            break;
        }
        let md = MultiDegree::new(gs.iter().map(|f| f.degree()).collect())?;
        let threshold = phi.value(&md);
        let Some((idxs, lambda, pairs)) = find_weak_combo(field, &gs, threshold, budget)? else {
            break;
        };
        // c · g = sum of pairs; eliminate the first member with a nonzero
        // coefficient
        let bpos = lambda.iter().position(|&l| l != 0).unwrap();
        let b = idxs[bpos];
        let cb = lambda[bpos];
        let old_len = gs.len();
        let mut new_forms: Vec<Form> = gs.clone();
        new_forms.remove(b);
        let base = new_forms.len();
        for (u, v) in &pairs {
            new_forms.push(u.clone());
            new_forms.push(v.clone());
        }
        let new_len = new_forms.len();
        let old_to_new = |k: usize| if k < b { k } else { k - 1 };
        // x_b = cb^{-1} ( sum U_j V_j  -  sum_{k != b} lambda_k x_k )
        let mut repl = GenPoly::zero(new_len);
        for j in 0..pairs.len() {
            repl = repl.add(
                field,
                &GenPoly::var(new_len, base + 2 * j).mul(field, &GenPoly::var(new_len, base + 2 * j + 1)),
            );
        }
        for (&l, &k) in lambda.iter().zip(&idxs) {
            if k != b && l != 0 {
                repl = repl.sub(field, &GenPoly::var(new_len, old_to_new(k)).scale(field, l));
            }
        }
        repl = repl.scale(field, field.inv(cb));
        let sub: Vec<GenPoly> = (0..old_len)
            .map(|k| if k == b { repl.clone() } else { GenPoly::var(new_len, old_to_new(k)) })
            .collect();
        exprs = exprs.iter().map(|e| e.substitute(field, &sub)).collect();
        // restore non-increasing degree order with a stable permutation
        let mut order: Vec<usize> = (0..new_len).collect();
        order.sort_by_key(|&j| std::cmp::Reverse(new_forms[j].degree()));
        let mut inv = vec![0usize; new_len];
        for (pnew, &j) in order.iter().enumerate() {
            inv[j] = pnew;
        }
        let perm: Vec<GenPoly> = (0..new_len).map(|j| GenPoly::var(new_len, inv[j])).collect();
        exprs = exprs.iter().map(|e| e.substitute(field, &perm)).collect();
        let reordered: Vec<Form> = order.iter().map(|&j| new_forms[j].clone()).collect();
        let new_md = MultiDegree::new(reordered.iter().map(|f| f.degree()).collect())?;
        assert!(new_md < md, "multi-degree must strictly decrease at every split");
        gs = reordered;
        verify_step(&gs, &exprs);
    }
    let out = Regularized { tuple: FormTuple::new(n, gs)?, exprs };
    assert!(out.verify(field, ft));
    Ok(out)
}

/// A point of `Z(ft)` with `g` nonzero when the high-degree head has
/// strength hypotheses only best-effort available: the low-degree tail
/// (degrees below `deg g`) is regularized and the combined system solved
/// by `dense_point`. `i` is the number of head forms.
pub fn lowdeg_point(
    field: &FqField,
    ft: &FormTuple,
    g: &Form,
    i: usize,
    budget: &Budget,
) -> Result<(Vec<Elem>, Certificate)> {
    let n = ft.nvars();
    let r = ft.len();
    let dprime = g.degree();
    if i > r {
        return Err(Error::HypothesisViolated(format!("split index {i} exceeds tuple length {r}")));
    }
    for (j, f) in ft.forms().iter().enumerate() {
        let ok = if j < i { f.degree() >= dprime } else { f.degree() < dprime };
        if !ok {
            return Err(Error::HypothesisViolated(
                "degrees must split into a high head and a low tail at the given index".into(),
            ));
        }
    }
    let head: Vec<Form> = ft.forms()[..i].to_vec();
    let tail = FormTuple::new(n, ft.forms()[i..].to_vec())?;
    let reg = regularize(field, &tail, &Phi::Const(1), budget)?;
    let mut combined = head.clone();
    combined.extend(reg.tuple.forms().iter().cloned());
    let combined = FormTuple::new(n, combined)?;
    let (point, _) = dense_point(field, &combined, g, budget)?;
    // the regularized expressions have zero constant term, so the tail
    // vanishes wherever the combined system does; replay directly anyway
    for e in &reg.exprs {
        assert_eq!(e.constant_term(), 0);
    }
    assert!(ft.vanishes_at(field, &point));
    assert_ne!(g.eval(field, &point), 0);
    let mut cb = CertBuilder::new(ClaimKind::DensePoint);
    cb.kv("field", field.descriptor());
    cb.kv("nvars", n);
    for f in ft.forms() {
        cb.kv("form", text::render_form(field, f));
    }
    cb.kv("g", text::render_form(field, g));
    for f in reg.tuple.forms() {
        cb.kv("regularized", text::render_form(field, f));
    }
    cb.kv("point", text::render_point(field, &point));
    for j in 0..r {
        cb.check(format!("vanish f{} at point", j + 1));
    }
    cb.check("nonzero g at point");
    Ok((point, cb.finish()))
}

/// `Z' = Z(g̲) ⊆ Z(f̲)` with `codim(Z') <= len(g̲)`: regularize, verify the
/// containment through the zero-constant expressions, and report the
/// bound with a replayable certificate.
pub fn closure_codim_bound(
    field: &FqField,
    ft: &FormTuple,
    phi: &Phi,
    budget: &Budget,
) -> Result<(Regularized, usize, Certificate)> {
    let reg = regularize(field, ft, phi, budget)?;
    let bound = reg.tuple.len();
    for e in &reg.exprs {
        assert_eq!(e.constant_term(), 0, "expressions must have zero constant term");
    }
    let mut cb = CertBuilder::new(ClaimKind::ClosureBound);
    cb.kv("field", field.descriptor());
    cb.kv("nvars", ft.nvars());
    for f in ft.forms() {
        cb.kv("form", text::render_form(field, f));
    }
    for gf in reg.tuple.forms() {
        cb.kv("gout", text::render_form(field, gf));
    }
    for e in &reg.exprs {
        cb.kv("expr", text::render_gpoly(field, e));
    }
    cb.kv("bound", bound);
    for j in 0..ft.len() {
        cb.check(format!("reconstruct f{} from the output tuple", j + 1));
        cb.check(format!("zero constant term in expr{}", j + 1));
    }
    Ok((reg, bound, cb.finish()))
}

/// Certificate for a successful normal form, replayable from the
/// serialized data alone.
pub fn normal_form_certificate(
    field: &FqField,
    ft: &FormTuple,
    g: &Form,
    nf: &NormalFormData,
) -> Certificate {
    let mut cb = CertBuilder::new(ClaimKind::NormalForm);
    cb.kv("field", field.descriptor());
    cb.kv("nvars", ft.nvars());
    for f in ft.forms() {
        cb.kv("form", text::render_form(field, f));
    }
    cb.kv("g", text::render_form(field, g));
    let ds: Vec<String> = nf.degrees.iter().map(|d| d.to_string()).collect();
    cb.kv("degrees", ds.join(","));
    for row in nf.w.basis() {
        cb.kv("wrow", text::render_point(field, row));
    }
    cb.kv("a", text::render_point(field, &nf.a));
    cb.kv("b", text::render_point(field, &nf.b));
    for hi in &nf.h {
        cb.kv("h", text::render_form(field, hi));
    }
    cb.kv("point", text::render_point(field, &nf.witness));
    for i in 0..nf.r() {
        cb.check(format!("template match for f{}", i + 1));
        cb.check(format!("nonzero b{}", i + 1));
    }
    cb.check("witness lies on Z within W with g nonzero");
    cb.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_form;

    fn f(field: &FqField, s: &str) -> Form {
        parse_form(field, s).unwrap()
    }

    #[test]
    fn nonvanishing_section_cases() {
        let k = FqField::new(5, 1).unwrap();
        let ft = FormTuple::new(2, vec![f(&k, "poly 2 2: [4] 0,2; [1] 2,0")]).unwrap();
        let g = Form::power_monomial(2, 1, 0, 1);
        let (sec, x) = nonvanishing_section(&k, &ft, &g, &Budget::default()).unwrap();
        assert!(sec.dim() == 1 && x[0] != 0);
        assert!(ft.vanishes_at(&k, &x));
        // g vanishing identically on Z
        let ft = FormTuple::new(2, vec![Form::power_monomial(2, 2, 0, 1)]).unwrap();
        let gx = Form::power_monomial(2, 1, 0, 1);
        assert!(matches!(
            nonvanishing_section(&k, &ft, &gx, &Budget::default()),
            Err(Error::NoWitness)
        ));
        // constant g
        let (sec, x) = nonvanishing_section(&k, &ft, &one(2), &Budget::default()).unwrap();
        assert_eq!(sec.dim(), 0);
        assert!(x.iter().all(|&c| c == 0));
    }

    #[test]
    fn normal_form_diagonal_quadric_f7() {
        let k = FqField::new(7, 1).unwrap();
        let mut form = Form::zero(10, 2);
        for i in 0..10 {
            form = form.add(&k, &Form::power_monomial(10, 2, i, 1)).unwrap();
        }
        let ft = FormTuple::new(10, vec![form]).unwrap();
        let g = Form::power_monomial(10, 1, 0, 1);
        let nf = normal_form(&k, &ft, &g, &Budget::default()).unwrap();
        assert_eq!(nf.r(), 1);
        assert!(nf.verify(&k, &ft));
        assert_ne!(nf.b[0], 0);
    }

    #[test]
    fn chart_solves_exactly() {
        let k = FqField::new(3, 1).unwrap();
        // hand-built normal form: f = x*y + z^2 on a 3-dim ambient space
        let form = f(&k, "poly 3 2: [1] 0,0,2; [1] 1,1,0");
        let ft = FormTuple::new(3, vec![form]).unwrap();
        let nf = NormalFormData {
            w: Subspace::full(3),
            degrees: vec![2],
            a: vec![0],
            b: vec![1],
            h: vec![Form::zero(3, 2)],
            witness: vec![0, 1, 0],
        };
        assert!(nf.verify(&k, &ft));
        // solved chart: (y,z) = (1,1) -> x = -1
        let p = chart_point(&k, &nf, &[1], &[1], &[]).unwrap();
        assert_eq!(p, vec![2, 1, 1]);
        assert!(ft.vanishes_at(&k, &p));
        assert!(chart_point(&k, &nf, &[0], &[1], &[]).is_none());
        // exactly (q-1)*q points, pairwise distinct
        let pts = all_chart_points(&k, &nf, &ft, &Budget::default()).unwrap();
        assert_eq!(pts.len(), 2 * 3);
        let set: std::collections::BTreeSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), pts.len());
    }

    #[test]
    fn dense_point_examples() {
        let k = FqField::new(7, 1).unwrap();
        let mut form = Form::zero(10, 2);
        for i in 0..10 {
            form = form.add(&k, &Form::power_monomial(10, 2, i, 1)).unwrap();
        }
        let ft = FormTuple::new(10, vec![form]).unwrap();
        let g = Form::power_monomial(10, 1, 0, 1);
        let (p, cert) = dense_point(&k, &ft, &g, &Budget::default()).unwrap();
        assert!(ft.vanishes_at(&k, &p));
        assert_ne!(p[0], 0);
        let text = cert.to_text();
        assert!(Certificate::parse(&text).is_ok());
        // constant g: any chart point qualifies
        let (p, _) = dense_point(&k, &ft, &one(10), &Budget::default()).unwrap();
        assert!(ft.vanishes_at(&k, &p));
    }

    #[test]
    fn regularize_examples() {
        let k = FqField::new(2, 1).unwrap();
        // x*y + z*w has strength 2 > 1: identity output
        let hyp = f(&k, "poly 4 2: [1] 0,0,1,1; [1] 1,1,0,0");
        let ft = FormTuple::new(4, vec![hyp.clone()]).unwrap();
        let reg = regularize(&k, &ft, &Phi::Const(1), &Budget::default()).unwrap();
        assert_eq!(reg.tuple.forms(), std::slice::from_ref(&hyp));
        // x*y splits into (x, y)
        let xy = f(&k, "poly 2 2: [1] 1,1");
        let ft = FormTuple::new(2, vec![xy]).unwrap();
        let reg = regularize(&k, &ft, &Phi::Const(1), &Budget::default()).unwrap();
        assert_eq!(reg.tuple.len(), 2);
        assert!(reg.tuple.forms().iter().all(|f| f.degree() == 1));
        assert!(reg.verify(&k, &ft));
    }

    #[test]
    fn lowdeg_point_examples() {
        let k = FqField::new(2, 1).unwrap();
        // head empty, tail (x1*x2) under d' = 3
        let xy = f(&k, "poly 4 2: [1] 1,1,0,0");
        let ft = FormTuple::new(4, vec![xy]).unwrap();
        let g = f(&k, "poly 4 3: [1] 0,0,3,0");
        let (p, _) = lowdeg_point(&k, &ft, &g, 0, &Budget::default()).unwrap();
        assert!(ft.vanishes_at(&k, &p));
        assert_ne!(g.eval(&k, &p), 0);
        // wrong split rejected
        assert!(matches!(
            lowdeg_point(&k, &ft, &g, 1, &Budget::default()),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn closure_codim_examples() {
        let k = FqField::new(2, 1).unwrap();
        let xy = f(&k, "poly 2 2: [1] 1,1");
        let ft = FormTuple::new(2, vec![xy.clone()]).unwrap();
        let (reg, bound, cert) = closure_codim_bound(&k, &ft, &Phi::Const(1), &Budget::default()).unwrap();
        assert_eq!(bound, 2);
        // containment pointwise: Z(x,y) = {0} ⊆ Z(xy)
        for p in [[0u16, 0], [0, 1], [1, 0], [1, 1]] {
            if reg.tuple.vanishes_at(&k, &p) {
                assert_eq!(xy.eval(&k, &p), 0);
            }
        }
        assert!(Certificate::parse(&cert.to_text()).is_ok());
        // high-strength tuple: identity, bound = r
        let hyp = f(&k, "poly 4 2: [1] 0,0,1,1; [1] 1,1,0,0");
        let ft2 = FormTuple::new(4, vec![hyp]).unwrap();
        let (_, bound2, _) = closure_codim_bound(&k, &ft2, &Phi::Const(1), &Budget::default()).unwrap();
        assert_eq!(bound2, 1);
    }
}
