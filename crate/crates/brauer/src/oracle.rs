//! Independent brute-force ground truth: exhaustive zero-locus
//! enumeration, certificate replay by evaluation alone, the extension
//! point-count probe, and the density proxy check.
//!
//! Nothing in this module trusts how a witness was found; every claim is
//! recomputed from the serialized data.

use crate::budget::Budget;
use crate::cert::{Certificate, ClaimKind};
use crate::error::{Error, Result};
use crate::field::{Elem, ExtField, FqField};
use crate::linalg;
use crate::poly::{exponents, Form, FormTuple, GenPoly, Subspace};
use crate::text;

/// The complete F_q-point set of `Z(ft)`, by direct evaluation.
#[derive(Debug, Clone)]
pub struct ZeroLocus {
    pub nvars: usize,
    pub points: Vec<Vec<Elem>>,
}

/// Enumerate `Z(ft)` exhaustively; errors when `q^nvars` exceeds the try
/// budget.
pub fn enumerate_zero_locus(field: &FqField, ft: &FormTuple, budget: &Budget) -> Result<ZeroLocus> {
    let n = ft.nvars();
    let q = field.q() as u64;
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= budget.tries)
        .ok_or_else(|| Error::budget("zero locus enumeration"))?;
    let mut points = Vec::new();
    for code in 0..total {
        let v = linalg::decode_vector(field, code, n);
        if ft.vanishes_at(field, &v) {
            points.push(v);
        }
    }
    Ok(ZeroLocus { nvars: n, points })
}

/// The points of `Z(ft) ∩ W`, by enumerating `W` in its own coordinates.
pub fn enumerate_locus_in_subspace(
    field: &FqField,
    ft: &FormTuple,
    w: &Subspace,
    budget: &Budget,
) -> Result<Vec<Vec<Elem>>> {
    let dim = w.dim();
    let q = field.q() as u64;
    let total = q
        .checked_pow(dim as u32)
        .filter(|&t| t <= budget.tries)
        .ok_or_else(|| Error::budget("subspace locus enumeration"))?;
    let mut points = Vec::new();
    for code in 0..total {
        let c = linalg::decode_vector(field, code, dim);
        let p = w.to_ambient(field, &c);
        if ft.vanishes_at(field, &p) {
            points.push(p);
        }
    }
    Ok(points)
}

/// Outcome of replaying one certificate.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Each named check and whether its recomputation passed.
    pub checks: Vec<(String, bool)>,
    pub pass: bool,
}

impl VerifyReport {
    fn push(&mut self, name: impl Into<String>, ok: bool) {
        if !ok {
            self.pass = false;
        }
        self.checks.push((name.into(), ok));
    }

    /// The first failing check, if any.
    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|(_, ok)| !ok).map(|(n, _)| n.as_str())
    }
}

fn mf(msg: impl Into<String>) -> Error {
    Error::MalformedCertificate(msg.into())
}

fn parse_forms(field: &FqField, cert: &Certificate, key: &str, nvars: usize) -> Result<Vec<Form>> {
    cert.values(key)
        .into_iter()
        .map(|l| {
            let f = text::parse_form(field, l).map_err(|e| mf(format!("bad {key} line: {e}")))?;
            if f.nvars() != nvars {
                return Err(mf(format!("{key} line has wrong variable count")));
            }
            Ok(f)
        })
        .collect()
}

/// Replay every identity a certificate records, from the serialized data
/// alone. Structural problems (missing fields, digest mismatch) error as
/// `MalformedCertificate`; semantic mismatches produce a failing report.
pub fn verify_certificate(cert: &Certificate) -> Result<VerifyReport> {
    let field = text::parse_field(cert.value("field")?).map_err(|e| mf(format!("bad field: {e}")))?;
    let nvars: usize = cert
        .value("nvars")?
        .parse()
        .map_err(|_| mf("bad nvars"))?;
    let forms = parse_forms(&field, cert, "form", nvars)?;
    let ft = FormTuple::new(nvars, forms).map_err(|e| mf(format!("bad tuple: {e}")))?;
    let mut report = VerifyReport { checks: Vec::new(), pass: true };
    let mut expected: Vec<String> = Vec::new();
    match cert.claim {
        ClaimKind::NonzeroPoint => {
            let point = text::parse_point(&field, cert.value("point")?)
                .map_err(|e| mf(format!("bad point: {e}")))?;
            if point.len() != nvars {
                return Err(mf("point has wrong length"));
            }
            report.push("point nonzero", point.iter().any(|&c| c != 0));
            expected.push("point nonzero".into());
            for (i, f) in ft.forms().iter().enumerate() {
                let name = format!("vanish f{} at point", i + 1);
                report.push(name.clone(), f.eval(&field, &point) == 0);
                expected.push(name);
            }
        }
        ClaimKind::DensePoint => {
            let g = text::parse_form(&field, cert.value("g")?).map_err(|e| mf(format!("bad g: {e}")))?;
            let point = text::parse_point(&field, cert.value("point")?)
                .map_err(|e| mf(format!("bad point: {e}")))?;
            if point.len() != nvars || g.nvars() != nvars {
                return Err(mf("dimension mismatch in dense-point data"));
            }
            for (i, f) in ft.forms().iter().enumerate() {
                let name = format!("vanish f{} at point", i + 1);
                report.push(name.clone(), f.eval(&field, &point) == 0);
                expected.push(name);
            }
            report.push("nonzero g at point", g.eval(&field, &point) != 0);
            expected.push("nonzero g at point".into());
            // auxiliary regularized forms, when present, must also vanish
            for (j, l) in cert.values("regularized").into_iter().enumerate() {
                let rf = text::parse_form(&field, l).map_err(|e| mf(format!("bad regularized line: {e}")))?;
                report.push(format!("vanish regularized g{} at point", j + 1), rf.eval(&field, &point) == 0);
            }
        }
        ClaimKind::NormalForm => {
            let g = text::parse_form(&field, cert.value("g")?).map_err(|e| mf(format!("bad g: {e}")))?;
            let degrees: Vec<u32> = cert
                .value("degrees")?
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| mf("bad degrees")))
                .collect::<Result<_>>()?;
            let rows: Vec<Vec<Elem>> = cert
                .values("wrow")
                .into_iter()
                .map(|l| text::parse_point(&field, l).map_err(|e| mf(format!("bad wrow: {e}"))))
                .collect::<Result<_>>()?;
            let w = Subspace::new(&field, nvars, rows).map_err(|e| mf(format!("bad W basis: {e}")))?;
            let a = text::parse_point(&field, cert.value("a")?).map_err(|e| mf(format!("bad a: {e}")))?;
            let b = text::parse_point(&field, cert.value("b")?).map_err(|e| mf(format!("bad b: {e}")))?;
            let h: Vec<Form> = cert
                .values("h")
                .into_iter()
                .map(|l| text::parse_form(&field, l).map_err(|e| mf(format!("bad h line: {e}"))))
                .collect::<Result<_>>()?;
            let witness = text::parse_point(&field, cert.value("point")?)
                .map_err(|e| mf(format!("bad point: {e}")))?;
            let r = degrees.len();
            if a.len() != r || b.len() != r || h.len() != r || ft.len() != r || w.dim() < 3 * r {
                return Err(mf("inconsistent normal-form dimensions"));
            }
            if h.iter().any(|hi| hi.nvars() != w.dim()) {
                return Err(mf("residual form in wrong coordinates"));
            }
            let nf = crate::normalform::NormalFormData {
                w,
                degrees,
                a,
                b,
                h,
                witness: witness.clone(),
            };
            for i in 0..r {
                let name = format!("template match for f{}", i + 1);
                let ok = ft.forms()[i]
                    .restrict(&field, &nf.w)
                    .map_or(false, |rest| rest == nf.template(&field, i));
                report.push(name.clone(), ok);
                expected.push(name);
                let name = format!("nonzero b{}", i + 1);
                report.push(name.clone(), nf.b[i] != 0);
                expected.push(name);
            }
            let on_z = ft.vanishes_at(&field, &witness)
                && nf.w.contains(&field, &witness)
                && g.eval(&field, &witness) != 0;
            report.push("witness lies on Z within W with g nonzero", on_z);
            expected.push("witness lies on Z within W with g nonzero".into());
        }
        ClaimKind::ClosureBound => {
            let gout = parse_forms(&field, cert, "gout", nvars)?;
            let exprs: Vec<GenPoly> = cert
                .values("expr")
                .into_iter()
                .map(|l| text::parse_gpoly(&field, l).map_err(|e| mf(format!("bad expr: {e}"))))
                .collect::<Result<_>>()?;
            let bound: usize = cert.value("bound")?.parse().map_err(|_| mf("bad bound"))?;
            if exprs.len() != ft.len() {
                return Err(mf("one expression per input form required"));
            }
            report.push("bound equals output tuple length", bound == gout.len());
            for (i, (f, e)) in ft.forms().iter().zip(&exprs).enumerate() {
                let name = format!("reconstruct f{} from the output tuple", i + 1);
                let ok = e.nvars() == gout.len()
                    && e.substitute_forms(&field, &gout) == GenPoly::from_form(f);
                report.push(name.clone(), ok);
                expected.push(name);
                let name = format!("zero constant term in expr{}", i + 1);
                report.push(name.clone(), e.constant_term() == 0);
                expected.push(name);
            }
        }
    }
    // the recorded transcript must not claim checks the data does not
    // support, and must cover every check the claim kind requires
    let recorded: Vec<&str> = cert
        .body
        .iter()
        .filter_map(|l| l.strip_prefix("check: ").and_then(|s| s.strip_suffix(" ok")))
        .collect();
    for name in &expected {
        if !recorded.iter().any(|r| r == name) {
            report.push(format!("transcript records `{name}`"), false);
        }
    }
    Ok(report)
}

/// Point counts `|Z(F_{q^m})|` for `m = 1..=max_ext`. NON-CERTIFIED
/// heuristic: trend inspection only, never fed into certificates.
pub fn irreducibility_probe(
    field: &FqField,
    ft: &FormTuple,
    max_ext: u32,
    budget: &Budget,
) -> Result<Vec<u64>> {
    let n = ft.nvars();
    let mut counts = Vec::new();
    for m in 1..=max_ext {
        let ef = ExtField::new(field, m)?;
        let eq = ef.ext.q() as u64;
        let total = eq
            .checked_pow(n as u32)
            .filter(|&t| t <= budget.tries)
            .ok_or_else(|| Error::budget("extension point count"))?;
        // lift coefficients through the embedding
        let lifted: Vec<Form> = ft
            .forms()
            .iter()
            .map(|f| {
                Form::new(
                    n,
                    f.degree(),
                    f.terms().map(|(e, &c)| (e.clone(), ef.embed[c as usize])),
                )
            })
            .collect::<Result<_>>()?;
        let mut count = 0u64;
        for code in 0..total {
            let v = linalg::decode_vector(&ef.ext, code, n);
            if lifted.iter().all(|f| f.eval(&ef.ext, &v) == 0) {
                count += 1;
            }
        }
        counts.push(count);
    }
    Ok(counts)
}

/// Outcome of the density proxy check.
#[derive(Debug, Clone)]
pub struct DensityReport {
    /// Per degree `1..=bound`: the rank of the monomial-evaluation matrix
    /// over the reference locus and over the generated points.
    pub ranks: Vec<(u32, usize, usize)>,
    pub pass: bool,
    /// On failure: an explicit test form vanishing on every generated
    /// point but not on the reference locus.
    pub counterexample: Option<Form>,
}

/// Density proxy: every form of degree `<= bound` that is nonzero
/// somewhere on the reference locus must be nonzero at some generated
/// point. Decided exactly through ranks of monomial-evaluation matrices:
/// since the generated points are a subset of the locus, the forms
/// vanishing on them form a superspace, and equality of ranks per degree
/// is equivalent to the quantified statement.
pub fn density_proxy_check(
    field: &FqField,
    reference: &[Vec<Elem>],
    generated: &[Vec<Elem>],
    bound: u32,
) -> DensityReport {
    let nvars = reference.first().map_or(0, |p| p.len());
    for p in generated {
        assert!(
            reference.contains(p),
            "generated points must lie inside the reference locus"
        );
    }
    let mut ranks = Vec::new();
    let mut counterexample = None;
    let mut pass = true;
    for d in 1..=bound {
        let exps = exponents(nvars, d);
        let eval_matrix = |pts: &[Vec<Elem>]| -> Vec<Vec<Elem>> {
            pts.iter()
                .map(|p| {
                    exps.iter()
                        .map(|e| {
                            let mut t = 1 as Elem;
                            for (i, &ei) in e.iter().enumerate() {
                                if ei > 0 {
                                    t = field.mul(t, field.pow(p[i], ei as u32));
                                }
                            }
                            t
                        })
                        .collect()
                })
                .collect()
        };
        let mref = eval_matrix(reference);
        let mgen = eval_matrix(generated);
        let rref_rank = linalg::rank(field, &mref);
        let gen_rank = linalg::rank(field, &mgen);
        if gen_rank != rref_rank && counterexample.is_none() {
            pass = false;
            // a kernel vector of the generated matrix that fails on the
            // reference locus is an explicit counterexample
            let ker = linalg::kernel_basis(field, &mgen, exps.len());
            'outer: for coeffs in ker {
                let g = Form::new(
                    nvars,
                    d,
                    exps.iter().cloned().zip(coeffs.iter().copied()).filter(|&(_, c)| c != 0),
                )
                .expect("kernel form");
                for p in reference {
                    if g.eval(field, p) != 0 {
                        counterexample = Some(g);
                        break 'outer;
                    }
                }
            }
        }
        if gen_rank != rref_rank {
            pass = false;
        }
        ranks.push((d, rref_rank, gen_rank));
    }
    DensityReport { ranks, pass, counterexample }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_form;

    #[test]
    fn zero_locus_examples() {
        let k = FqField::new(2, 1).unwrap();
        let empty = FormTuple::new(2, vec![]).unwrap();
        assert_eq!(enumerate_zero_locus(&k, &empty, &Budget::default()).unwrap().points.len(), 4);
        let x1 = FormTuple::new(2, vec![Form::power_monomial(2, 1, 0, 1)]).unwrap();
        let z = enumerate_zero_locus(&k, &x1, &Budget::default()).unwrap();
        assert_eq!(z.points, vec![vec![0, 0], vec![0, 1]]);
        let k3 = FqField::new(3, 1).unwrap();
        let f = parse_form(&k3, "poly 3 2: [1] 0,0,2; [1] 0,2,0; [1] 2,0,0").unwrap();
        let z = enumerate_zero_locus(&k3, &FormTuple::new(3, vec![f]).unwrap(), &Budget::default()).unwrap();
        assert_eq!(z.points.len(), 9);
        assert!(z.points.contains(&vec![1, 1, 1]));
    }

    #[test]
    fn locus_invariance() {
        let k = FqField::new(3, 1).unwrap();
        let f = parse_form(&k, "poly 2 2: [1] 0,2; [1] 2,0").unwrap();
        let g = parse_form(&k, "poly 2 2: [2] 0,2; [2] 2,0").unwrap();
        // permutation / scaling of the tuple leaves the locus unchanged
        let za = enumerate_zero_locus(&k, &FormTuple::new(2, vec![f.clone(), g.clone()]).unwrap(), &Budget::default()).unwrap();
        let zb = enumerate_zero_locus(&k, &FormTuple::new(2, vec![g, f]).unwrap(), &Budget::default()).unwrap();
        assert_eq!(za.points, zb.points);
    }

    #[test]
    fn verify_nonzero_point_cert() {
        use crate::cert::{CertBuilder, ClaimKind};
        let k = FqField::new(3, 1).unwrap();
        let f = parse_form(&k, "poly 3 2: [1] 0,0,2; [1] 0,2,0; [1] 2,0,0").unwrap();
        let mut cb = CertBuilder::new(ClaimKind::NonzeroPoint);
        cb.kv("field", "GF(3)");
        cb.kv("nvars", 3);
        cb.kv("form", crate::text::render_form(&k, &f));
        cb.kv("point", "([1], [1], [1])");
        cb.check("point nonzero");
        cb.check("vanish f1 at point");
        let cert = cb.finish();
        let rep = verify_certificate(&cert).unwrap();
        assert!(rep.pass, "{:?}", rep.checks);
        // wrong point: digest still fine if rebuilt, but replay fails
        let mut cb = CertBuilder::new(ClaimKind::NonzeroPoint);
        cb.kv("field", "GF(3)");
        cb.kv("nvars", 3);
        cb.kv("form", crate::text::render_form(&k, &f));
        cb.kv("point", "([1], [1], [0])");
        cb.check("point nonzero");
        cb.check("vanish f1 at point");
        let rep = verify_certificate(&cb.finish()).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.first_failure(), Some("vanish f1 at point"));
    }

    #[test]
    fn probe_counts() {
        let k = FqField::new(2, 1).unwrap();
        // hyperplane x1 = 0 in 3 vars: q^{2m} points over F_{q^m}
        let ft = FormTuple::new(3, vec![Form::power_monomial(3, 1, 0, 1)]).unwrap();
        let counts = irreducibility_probe(&k, &ft, 3, &Budget::default()).unwrap();
        assert_eq!(counts, vec![4, 16, 64]);
        // reducible x*y: 2q^{m(n-1)} - q^{m(n-2)} with n = 2
        let xy = parse_form(&k, "poly 2 2: [1] 1,1").unwrap();
        let ft = FormTuple::new(2, vec![xy]).unwrap();
        let counts = irreducibility_probe(&k, &ft, 3, &Budget::default()).unwrap();
        assert_eq!(counts, vec![3, 7, 15]);
    }

    #[test]
    fn density_rank_proxy() {
        let k = FqField::new(3, 1).unwrap();
        // reference: all of F_3^2; generated: the x-axis -> fails at
        // degree 1 with counterexample ~ the second coordinate
        let all: Vec<Vec<Elem>> = (0..9).map(|c| linalg::decode_vector(&k, c, 2)).collect();
        let axis: Vec<Vec<Elem>> = vec![vec![0, 0], vec![1, 0], vec![2, 0]];
        let rep = density_proxy_check(&k, &all, &axis, 1);
        assert!(!rep.pass);
        let g = rep.counterexample.unwrap();
        assert!(axis.iter().all(|p| g.eval(&k, p) == 0));
        // generated = reference: vacuous pass
        let rep = density_proxy_check(&k, &all, &all, 2);
        assert!(rep.pass);
    }
}
