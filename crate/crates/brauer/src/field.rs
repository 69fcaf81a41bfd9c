//! Exact arithmetic for finite fields `F_q` with `q = p^e`, power-class
//! structure, level witnesses, and the diagonal-form solvers.
//!
//! Elements are indices into precomputed operation tables. The index of an
//! element with coordinates `(c_0, ..., c_{e-1})` (coefficients of the
//! residue polynomial, ascending powers) is `sum c_i p^i`. The fixed total
//! order used everywhere for representative selection and tie-breaking is
//! ascending index order, which coincides with lexicographic order on the
//! rendered coordinate tuple `[c_{e-1}, ..., c_0]` (descending powers).

use crate::error::{Error, Result};

/// An element of a finite field, as an index into the field's tables.
pub type Elem = u16;

/// Largest supported field order. Tables are `q^2` entries.
pub const MAX_Q: u64 = 4096;

/// A concrete finite field `F_{p^e}` with table-based arithmetic.
#[derive(Clone)]
pub struct FqField {
    p: u32,
    e: u32,
    q: u32,
    /// Monic irreducible modulus over `F_p`, ascending coefficients,
    /// length `e + 1`.
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for FqField {}

impl std::fmt::Debug for FqField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FqField({})", self.descriptor())
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial arithmetic over `F_p` on `Vec<u32>` coefficient vectors
/// (ascending powers, no trailing-zero guarantees).
mod fp_poly {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for i in 0..=dm {
                let idx = shift + i;
                let sub = (lead * m[i]) % p;
                r[idx] = (r[idx] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    /// Whether monic `m` of degree >= 1 is irreducible over `F_p`,
    /// by trial division against all lower-degree monic polynomials.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let dm = m.len() - 1;
        if dm == 1 {
            return true;
        }
        for deg in 1..=dm / 2 {
            // enumerate monic divisor candidates of this degree
            let count = (p as u64).pow(deg as u32);
            for code in 0..count {
                let mut cand = Vec::with_capacity(deg + 1);
                let mut c = code;
                for _ in 0..deg {
                    cand.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                cand.push(1);
                if rem(m, &cand, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FqField {
    /// The field `F_{p^e}` with the default modulus: the first irreducible
    /// monic degree-`e` polynomial in the fixed monic ordering (ascending
    /// integer encoding of the non-leading coefficients).
    pub fn new(p: u32, e: u32) -> Result<FqField> {
        let modulus = Self::default_modulus(p, e)?;
        Self::with_modulus(p, e, modulus)
    }

    /// The field of order `q`, factoring `q` as a prime power.
    pub fn of_order(q: u32) -> Result<FqField> {
        if q < 2 {
            return Err(Error::InvalidField(format!("order {q} is not a prime power")));
        }
        let mut p = 2;
        while q % p != 0 {
            p += 1;
        }
        let mut e = 0;
        let mut m = q;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if m != 1 {
            return Err(Error::InvalidField(format!("order {q} is not a prime power")));
        }
        Self::new(p, e)
    }

    fn default_modulus(p: u32, e: u32) -> Result<Vec<u32>> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        if e == 1 {
            return Ok(vec![0, 1]);
        }
        let count = (p as u64).pow(e);
        for code in 0..count {
            let mut cand = Vec::with_capacity(e as usize + 1);
            let mut c = code;
            for _ in 0..e {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if fp_poly::is_irreducible(&cand, p) {
                return Ok(cand);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    /// Build `F_{p^e}` from an explicit monic modulus (ascending
    /// coefficients, length `e + 1`). Irreducibility is verified.
    pub fn with_modulus(p: u32, e: u32, modulus: Vec<u32>) -> Result<FqField> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q64 = (p as u64).pow(e);
        if q64 > MAX_Q {
            return Err(Error::InvalidField(format!(
                "field order {q64} exceeds the supported maximum {MAX_Q}"
            )));
        }
        if modulus.len() != e as usize + 1
            || modulus.last() != Some(&1)
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::InvalidField("modulus must be monic of degree e with coefficients in F_p".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        let q = q64 as u32;
        let qi = q as usize;

        let coeffs = |idx: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut c = idx;
            for _ in 0..e {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let index = |cs: &[u32]| -> u32 {
            let mut idx = 0u32;
            for &c in cs.iter().rev() {
                idx = idx * p + c;
            }
            idx
        };

        let mut add = vec![0 as Elem; qi * qi];
        let mut mul = vec![0 as Elem; qi * qi];
        let mut neg = vec![0 as Elem; qi];
        for a in 0..q {
            let ca = coeffs(a);
            let mut cn = vec![0u32; e as usize];
            for i in 0..e as usize {
                cn[i] = (p - ca[i]) % p;
            }
            neg[a as usize] = index(&cn) as Elem;
            for b in a..q {
                let cb = coeffs(b);
                let mut cs = vec![0u32; e as usize];
                for i in 0..e as usize {
                    cs[i] = (ca[i] + cb[i]) % p;
                }
                let s = index(&cs) as Elem;
                add[a as usize * qi + b as usize] = s;
                add[b as usize * qi + a as usize] = s;
                let mut prod = fp_poly::mul(&ca, &cb, p);
                prod = fp_poly::rem(&prod, &modulus, p);
                prod.resize(e as usize, 0);
                let m = index(&prod) as Elem;
                mul[a as usize * qi + b as usize] = m;
                mul[b as usize * qi + a as usize] = m;
            }
        }
        let mut inv = vec![0 as Elem; qi];
        for a in 1..q {
            for b in 1..q {
                if mul[a as usize * qi + b as usize] == 1 {
                    inv[a as usize] = b as Elem;
                    break;
                }
            }
            debug_assert!(inv[a as usize] != 0, "every nonzero element has an inverse");
        }

        let field = FqField { p, e, q, modulus, add, mul, neg, inv };
        field.verify_construction()?;
        Ok(field)
    }

    /// Construction-time invariant checks: cyclic multiplicative group
    /// (exhaustive for q <= 64) and the Frobenius homomorphism fixing the
    /// prime subfield.
    fn verify_construction(&self) -> Result<()> {
        if self.q <= 64 {
            let mut found_generator = false;
            for g in 1..self.q {
                if self.order(g as Elem) == self.q - 1 {
                    found_generator = true;
                    break;
                }
            }
            if !found_generator {
                return Err(Error::InvalidField("multiplicative group is not cyclic".into()));
            }
            let frob = |x: Elem| self.pow(x, self.p);
            for a in 0..self.q as Elem {
                for b in 0..self.q as Elem {
                    if frob(self.add(a, b)) != self.add(frob(a), frob(b))
                        || frob(self.mul(a, b)) != self.mul(frob(a), frob(b))
                    {
                        return Err(Error::InvalidField("Frobenius is not a homomorphism".into()));
                    }
                }
            }
            if self.e == 1 {
                for a in 0..self.q as Elem {
                    if frob(a) != a {
                        return Err(Error::InvalidField("Frobenius must fix the prime field".into()));
                    }
                }
            }
        }
        Ok(())
    }

    fn order(&self, a: Elem) -> u32 {
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
            if n > self.q {
                return 0;
            }
        }
        n
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn zero(&self) -> Elem {
        0
    }
    pub fn one(&self) -> Elem {
        1
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }
    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut n: u32) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Embed a small integer through the prime subfield.
    pub fn from_int(&self, n: u64) -> Elem {
        (n % self.p as u64) as Elem
    }

    /// `-1` in this field.
    pub fn minus_one(&self) -> Elem {
        self.neg(1)
    }

    /// All elements in the fixed total order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }

    /// Nonzero elements in the fixed total order.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.q as Elem
    }

    /// Coordinates of an element over `F_p`, ascending powers.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut c = a as u32;
        for _ in 0..self.e {
            v.push(c % self.p);
            c /= self.p;
        }
        v
    }

    /// Element from `F_p` coordinates (ascending powers).
    pub fn from_coords(&self, cs: &[u32]) -> Result<Elem> {
        if cs.len() != self.e as usize || cs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidField(format!(
                "element needs {} coordinates below {}",
                self.e, self.p
            )));
        }
        let mut idx = 0u32;
        for &c in cs.iter().rev() {
            idx = idx * self.p + c;
        }
        Ok(idx as Elem)
    }

    /// Text descriptor: `GF(p)` or `GF(p^e; modulus)`.
    pub fn descriptor(&self) -> String {
        if self.e == 1 {
            format!("GF({})", self.p)
        } else {
            format!("GF({}^{}; {})", self.p, self.e, self.modulus_string())
        }
    }

    pub fn modulus_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }

    /// Render an element as a coordinate tuple over `F_p`, descending
    /// powers: `[c_{e-1}, ..., c_0]`.
    pub fn render(&self, a: Elem) -> String {
        let cs = self.coords(a);
        let parts: Vec<String> = cs.iter().rev().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    pub fn render_vector(&self, v: &[Elem]) -> String {
        let parts: Vec<String> = v.iter().map(|&a| self.render(a)).collect();
        format!("({})", parts.join(", "))
    }
}

/// Representatives and witnesses for the classes of `K^x / (K^x)^d`.
#[derive(Debug, Clone)]
pub struct PowerClassTable {
    pub d: u32,
    /// One representative per class, each the smallest member of its class
    /// in the fixed total order, listed in ascending order.
    pub reps: Vec<Elem>,
    /// `class_of[u]` for nonzero `u` is the class index; entry 0 is unused.
    pub class_of: Vec<usize>,
    /// `witness[u] = w` with `u = reps[class_of[u]] * w^d`; entry 0 unused.
    pub witness: Vec<Elem>,
}

impl PowerClassTable {
    pub fn n_classes(&self) -> usize {
        self.reps.len()
    }
}

/// Representatives for `K^x/(K^x)^d` with stored witnesses.
pub fn power_classes(field: &FqField, d: u32) -> PowerClassTable {
    assert!(d >= 1);
    let q = field.q() as usize;
    let mut class_of = vec![usize::MAX; q];
    let mut witness = vec![0 as Elem; q];
    let mut reps = Vec::new();
    for u in field.units() {
        if class_of[u as usize] != usize::MAX {
            continue;
        }
        let cls = reps.len();
        reps.push(u);
        for t in field.units() {
            let m = field.mul(u, field.pow(t, d));
            if class_of[m as usize] == usize::MAX {
                class_of[m as usize] = cls;
                witness[m as usize] = t;
            }
        }
    }
    let table = PowerClassTable { d, reps, class_of, witness };
    // structural invariants, cheap enough to check on every construction
    for u in field.units() {
        let cls = table.class_of[u as usize];
        let w = table.witness[u as usize];
        assert_eq!(u, field.mul(table.reps[cls], field.pow(w, d)));
    }
    let n = table.reps.len() as u32;
    assert_eq!((field.q() - 1) % n, 0);
    assert_eq!(n, gcd(d, field.q() - 1));
    table
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A minimal expression `-1 = c_1^d + ... + c_m^d`.
#[derive(Debug, Clone)]
pub struct LevelWitness {
    pub d: u32,
    pub terms: Vec<Elem>,
}

impl LevelWitness {
    pub fn m(&self) -> usize {
        self.terms.len()
    }
}

/// Minimal `m` with `-1` a sum of `m` d-th powers, found by breadth-first
/// sumset growth (which is itself the exhaustive minimality search).
pub fn level_witness(field: &FqField, d: u32) -> LevelWitness {
    assert!(d >= 1);
    let target = field.minus_one();
    // nonzero d-th powers together with the element attaining each
    let mut powers: Vec<(Elem, Elem)> = Vec::new();
    let mut seen = vec![false; field.q() as usize];
    for c in field.units() {
        let v = field.pow(c, d);
        if !seen[v as usize] {
            seen[v as usize] = true;
            powers.push((v, c));
        }
    }
    // BFS over sums; prev[v] = (previous sum, power used)
    let q = field.q() as usize;
    let mut reach: Vec<Option<(Elem, Elem)>> = vec![None; q];
    let mut frontier: Vec<Elem> = vec![0];
    let mut layers: Vec<Vec<Elem>> = Vec::new();
    let mut visited = vec![false; q];
    visited[0] = true;
    loop {
        let mut next = Vec::new();
        for &s in &frontier {
            for &(v, c) in &powers {
                let t = field.add(s, v);
                if !visited[t as usize] {
                    visited[t as usize] = true;
                    reach[t as usize] = Some((s, c));
                    next.push(t);
                }
            }
        }
        layers.push(next.clone());
        if visited[target as usize] {
            break;
        }
        assert!(!next.is_empty(), "-1 must be a sum of d-th powers in a finite field");
        frontier = next;
    }
    let mut terms = Vec::new();
    let mut cur = target;
    while cur != 0 {
        let (prev, c) = reach[cur as usize].unwrap();
        terms.push(c);
        cur = prev;
    }
    terms.reverse();
    // replay the claimed identity
    let mut sum = field.zero();
    for &c in &terms {
        sum = field.add(sum, field.pow(c, d));
    }
    assert_eq!(sum, field.minus_one());
    LevelWitness { d, terms }
}

/// Existence of a nontrivial zero of the diagonal form with the given
/// coefficients, by value-set dynamic programming. `O(n * q^2)`.
pub fn diagonal_solvable(field: &FqField, coeffs: &[Elem], d: u32) -> bool {
    find_diagonal_zero(field, coeffs, d).is_some()
}

/// A nontrivial zero of a diagonal form, or `None` if there is none.
/// The returned vector is the first solution in the fixed sweep order
/// (coordinates chosen ascending, last coordinate fastest).
pub fn find_diagonal_zero(field: &FqField, coeffs: &[Elem], d: u32) -> Option<Vec<Elem>> {
    let n = coeffs.len();
    // suffix-reachable sums: reach[j] = sums achievable from coords j..n,
    // split by whether some coordinate is nonzero
    let q = field.q() as usize;
    let mut reach_any = vec![vec![false; q]; n + 1];
    let mut reach_nontriv = vec![vec![false; q]; n + 1];
    reach_any[n][0] = true;
    for j in (0..n).rev() {
        for s in 0..q {
            for x in field.elements() {
                let v = field.mul(coeffs[j], field.pow(x, d));
                let t = field.add(v, s as Elem) as usize;
                if reach_any[j + 1][s] {
                    reach_any[j][t] = true;
                    if x != 0 || reach_nontriv[j + 1][s] {
                        reach_nontriv[j][t] = true;
                    }
                }
                if reach_nontriv[j + 1][s] {
                    reach_nontriv[j][t] = true;
                }
            }
        }
    }
    if !reach_nontriv[0][0] {
        return None;
    }
    // reconstruct the first solution in fixed order
    let mut sol = Vec::with_capacity(n);
    let mut need: Elem = 0;
    let mut nontrivial_done = false;
    for j in 0..n {
        let mut chosen = None;
        for x in field.elements() {
            let v = field.mul(coeffs[j], field.pow(x, d));
            let rest = field.sub(need, v) as usize;
            let ok = if nontrivial_done || x != 0 {
                reach_any[j + 1][rest]
            } else {
                reach_nontriv[j + 1][rest]
            };
            if ok {
                chosen = Some(x);
                break;
            }
        }
        let x = chosen.expect("reachability table admits a completion");
        if x != 0 {
            nontrivial_done = true;
        }
        need = field.sub(need, field.mul(coeffs[j], field.pow(x, d)));
        sol.push(x);
    }
    debug_assert_eq!(need, 0);
    Some(sol)
}

/// The exact minimal `N` such that every diagonal degree-`d` form in more
/// than `N` variables over this field has a nontrivial zero.
///
/// Coefficient vectors are enumerated up to power-class symmetry (each
/// coefficient replaced by its class representative, orderings collapsed
/// to multisets); vectors with a zero coefficient are trivially solvable
/// and skipped.
pub fn nkd_exact(field: &FqField, d: u32, n_max: usize) -> Result<usize> {
    let classes = power_classes(field, d);
    for n in 1..=n_max {
        let mut all_solvable = true;
        let mut multiset = vec![0usize; n];
        'outer: loop {
            let coeffs: Vec<Elem> = multiset.iter().map(|&c| classes.reps[c]).collect();
            if !diagonal_solvable(field, &coeffs, d) {
                all_solvable = false;
            }
            // next non-decreasing index vector
            let mut i = n;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if multiset[i] + 1 < classes.n_classes() {
                    let v = multiset[i] + 1;
                    for slot in multiset.iter_mut().skip(i) {
                        *slot = v;
                    }
                    break;
                }
            }
            if !all_solvable {
                break;
            }
        }
        if all_solvable {
            // solvability is monotone in n: restricting an anisotropic form
            // to its first n coordinates stays anisotropic
            return Ok(n - 1);
        }
    }
    Err(Error::budget(format!("nkd_exact: no all-solvable n within n_max = {n_max}")))
}

/// A nontrivial zero of `sum a_i x_i^d`, by the constructive route:
/// zero-coefficient shortcut, then pigeonhole on power classes with the
/// level witness, then exhaustive search.
pub fn solve_diagonal(field: &FqField, coeffs: &[Elem], d: u32) -> Result<Vec<Elem>> {
    let n = coeffs.len();
    if n == 0 {
        return Err(Error::NoSolution);
    }
    let sol = solve_diagonal_inner(field, coeffs, d)?;
    // re-verify by evaluation on every call
    let mut sum = field.zero();
    for (a, x) in coeffs.iter().zip(&sol) {
        sum = field.add(sum, field.mul(*a, field.pow(*x, d)));
    }
    assert_eq!(sum, 0, "diagonal solution must evaluate to zero");
    assert!(sol.iter().any(|&x| x != 0), "diagonal solution must be nontrivial");
    Ok(sol)
}

fn solve_diagonal_inner(field: &FqField, coeffs: &[Elem], d: u32) -> Result<Vec<Elem>> {
    let n = coeffs.len();
    if let Some(i) = coeffs.iter().position(|&a| a == 0) {
        let mut sol = vec![0; n];
        sol[i] = 1;
        return Ok(sol);
    }
    let classes = power_classes(field, d);
    let level = level_witness(field, d);
    let m = level.m();
    // pigeonhole: some class held by at least m + 1 coefficients
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); classes.n_classes()];
    for (i, &a) in coeffs.iter().enumerate() {
        by_class[classes.class_of[a as usize]].push(i);
    }
    if let Some(members) = by_class.iter().find(|v| v.len() >= m + 1) {
        let mut sol = vec![0; n];
        for (t, &i) in members.iter().take(m + 1).enumerate() {
            let w = classes.witness[coeffs[i] as usize];
            sol[i] = if t < m { field.div(level.terms[t], w) } else { field.inv(w) };
        }
        return Ok(sol);
    }
    find_diagonal_zero(field, coeffs, d).ok_or(Error::NoSolution)
}

/// An extension field together with the data needed to work over its base:
/// the embedding of the base and a base-linear basis `1, b, ..., b^{m-1}`
/// where `b` generates the extension.
#[derive(Debug, Clone)]
pub struct ExtField {
    pub base: FqField,
    pub ext: FqField,
    pub m: u32,
    /// `embed[a]` is the image in `ext` of base element `a`.
    pub embed: Vec<Elem>,
    /// The basis `1, b, ..., b^{m-1}` as elements of `ext`.
    pub basis: Vec<Elem>,
    /// For each ext element, its base coordinates in `basis`.
    decomp: Vec<Vec<Elem>>,
}

impl ExtField {
    /// Build the degree-`m` extension of `base` with the default modulus.
    pub fn new(base: &FqField, m: u32) -> Result<ExtField> {
        let p = base.p();
        let ext = FqField::new(p, base.e() * m)?;
        // embed: the first root of the base modulus in the extension
        let root = ext
            .elements()
            .find(|&alpha| {
                let mut acc = ext.zero();
                let mut pw = ext.one();
                for &c in base.modulus() {
                    acc = ext.add(acc, ext.mul(ext.from_int(c as u64), pw));
                    pw = ext.mul(pw, alpha);
                }
                acc == 0
            })
            .ok_or_else(|| Error::InvalidField("base modulus has no root in extension".into()))?;
        let mut embed = Vec::with_capacity(base.q() as usize);
        for a in base.elements() {
            let cs = base.coords(a);
            let mut acc = ext.zero();
            let mut pw = ext.one();
            for &c in &cs {
                acc = ext.add(acc, ext.mul(ext.from_int(c as u64), pw));
                pw = ext.mul(pw, root);
            }
            embed.push(acc);
        }
        // the canonical generator x of the extension
        let beta = ext.from_coords(&{
            let mut v = vec![0u32; ext.e() as usize];
            if ext.e() >= 2 {
                v[1] = 1;
            }
            v
        })?;
        let beta = if ext.e() == 1 { ext.one() } else { beta };
        let mut basis = Vec::with_capacity(m as usize);
        let mut pw = ext.one();
        for _ in 0..m {
            basis.push(pw);
            pw = ext.mul(pw, beta);
        }
        // decompose every ext element over the base via F_p linear algebra
        let em = (base.e() * m) as usize;
        // columns: (j, a) -> embed(x^a in base) * beta^j, as F_p coordinate vectors
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(em);
        for j in 0..m as usize {
            for a in 0..base.e() as usize {
                let mut xa = vec![0u32; base.e() as usize];
                xa[a] = 1;
                let base_el = base.from_coords(&xa)?;
                let v = ext.mul(embed[base_el as usize], basis[j]);
                cols.push(ext.coords(v));
            }
        }
        // invert the em x em matrix over F_p by Gaussian elimination
        let p64 = p as i64;
        let mut mat: Vec<Vec<i64>> = (0..em)
            .map(|r| {
                let mut row: Vec<i64> = cols.iter().map(|c| c[r] as i64).collect();
                let mut id = vec![0i64; em];
                id[r] = 1;
                row.extend(id);
                row
            })
            .collect();
        for c in 0..em {
            let piv = (c..em)
                .find(|&r| mat[r][c] % p64 != 0)
                .ok_or_else(|| Error::InvalidField("extension basis is degenerate".into()))?;
            mat.swap(c, piv);
            let inv = mod_inv(mat[c][c].rem_euclid(p64), p64);
            for x in mat[c].iter_mut() {
                *x = (*x * inv).rem_euclid(p64);
            }
            for r in 0..em {
                if r != c && mat[r][c] % p64 != 0 {
                    let f = mat[r][c].rem_euclid(p64);
                    for k in 0..2 * em {
                        mat[r][k] = (mat[r][k] - f * mat[c][k]).rem_euclid(p64);
                    }
                }
            }
        }
        let mut decomp = Vec::with_capacity(ext.q() as usize);
        for u in ext.elements() {
            let target = ext.coords(u);
            // solution = inverse * target, giving (j, a) coordinates
            let mut sol = vec![0u32; em];
            for (r, s) in sol.iter_mut().enumerate() {
                let mut acc = 0i64;
                for (k, &t) in target.iter().enumerate() {
                    acc += mat[r][em + k] * t as i64;
                }
                *s = acc.rem_euclid(p64) as u32;
            }
            let mut lambdas = Vec::with_capacity(m as usize);
            for j in 0..m as usize {
                let cs: Vec<u32> = (0..base.e() as usize).map(|a| sol[j * base.e() as usize + a]).collect();
                lambdas.push(base.from_coords(&cs)?);
            }
            decomp.push(lambdas);
        }
        let ef = ExtField { base: base.clone(), ext, m, embed, basis, decomp };
        // spot-check the decomposition identity on every element
        for u in ef.ext.elements() {
            let mut acc = ef.ext.zero();
            for (j, &lam) in ef.decomp[u as usize].iter().enumerate() {
                acc = ef.ext.add(acc, ef.ext.mul(ef.embed[lam as usize], ef.basis[j]));
            }
            assert_eq!(acc, u);
        }
        Ok(ef)
    }

    /// Base coordinates of an extension element in the stored basis.
    pub fn decompose(&self, u: Elem) -> &[Elem] {
        &self.decomp[u as usize]
    }
}

fn mod_inv(a: i64, p: i64) -> i64 {
    // p is prime
    let mut r = 1i64;
    let mut base = a.rem_euclid(p);
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        n >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        let f4 = FqField::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]); // x^2 + x + 1
        let f9 = FqField::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]); // x^2 + 1
        assert_eq!(f9.descriptor(), "GF(3^2; x^2+1)");
    }

    #[test]
    fn arithmetic_f9() {
        let f = FqField::new(3, 2).unwrap();
        // x * x = -1 = 2 under modulus x^2 + 1
        let x = f.from_coords(&[0, 1]).unwrap();
        assert_eq!(f.mul(x, x), f.from_int(2));
        for a in f.units() {
            assert_eq!(f.mul(a, f.inv(a)), f.one());
        }
    }

    #[test]
    fn power_classes_f5_squares() {
        let f = FqField::new(5, 1).unwrap();
        let t = power_classes(&f, 2);
        assert_eq!(t.reps, vec![1, 2]);
        assert_eq!(t.n_classes(), 2);
    }

    #[test]
    fn power_classes_degree_one() {
        let f = FqField::new(7, 1).unwrap();
        let t = power_classes(&f, 1);
        assert_eq!(t.reps, vec![1]);
    }

    #[test]
    fn power_classes_f3() {
        let f = FqField::new(3, 1).unwrap();
        let t = power_classes(&f, 2);
        assert_eq!(t.n_classes(), 2);
    }

    #[test]
    fn level_witnesses() {
        let f5 = FqField::new(5, 1).unwrap();
        let w = level_witness(&f5, 2);
        assert_eq!(w.terms, vec![2]); // 2^2 = 4 = -1
        let f3 = FqField::new(3, 1).unwrap();
        let w = level_witness(&f3, 2);
        assert_eq!(w.terms, vec![1, 1]); // 1 + 1 = -1
        let f7 = FqField::new(7, 1).unwrap();
        let w = level_witness(&f7, 3);
        // independent check: exhaustive search over smaller m
        let cubes: Vec<Elem> = f7.units().map(|c| f7.pow(c, 3)).collect();
        let m1 = cubes.iter().any(|&v| v == f7.minus_one());
        assert_eq!(w.m() == 1, m1);
    }

    #[test]
    fn level_at_most_two() {
        // finite fields are non-real: s(F_q) <= 2
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49, 64] {
            let f = FqField::of_order(q).unwrap();
            assert!(level_witness(&f, 2).m() <= 2, "level of F_{q} exceeds 2");
        }
    }

    #[test]
    fn nkd_small() {
        let f2 = FqField::new(2, 1).unwrap();
        assert_eq!(nkd_exact(&f2, 2, 6).unwrap(), 1);
        let f3 = FqField::new(3, 1).unwrap();
        assert_eq!(nkd_exact(&f3, 2, 6).unwrap(), 2);
    }

    #[test]
    fn c1_bound_all_small_fields() {
        // N_k(d) <= d for every prime power q <= 64 and d <= 6
        let orders: Vec<u32> = (2..=64).filter(|&q| FqField::of_order(q).is_ok()).collect();
        for q in orders {
            let f = FqField::of_order(q).unwrap();
            for d in 1..=6 {
                let n = nkd_exact(&f, d, d as usize + 1).unwrap();
                assert!(n <= d as usize, "N_{{F_{q}}}({d}) = {n} > {d}");
                let classes = power_classes(&f, d);
                assert_eq!(classes.n_classes() as u32, gcd(d, f.q() - 1));
            }
        }
    }

    #[test]
    fn solve_diagonal_examples() {
        let f3 = FqField::new(3, 1).unwrap();
        let sol = solve_diagonal(&f3, &[1, 1, 1], 2).unwrap();
        assert_eq!(sol, vec![1, 1, 1]);

        let f7 = FqField::new(7, 1).unwrap();
        let sol = solve_diagonal(&f7, &[3, 0, 5], 2).unwrap();
        assert_eq!(sol, vec![0, 1, 0]);

        let f5 = FqField::new(5, 1).unwrap();
        // x^2 = 3 y^2 has no nonzero solution: 3 is a non-square mod 5
        assert!(matches!(solve_diagonal(&f5, &[1, 2], 2), Err(Error::NoSolution)));
    }

    #[test]
    fn pigeonhole_agrees_with_exhaustion() {
        // cross-validate solvability on all small instances
        for q in [2u32, 3, 4, 5, 7, 9] {
            let f = FqField::of_order(q).unwrap();
            for d in 1..=4u32 {
                let classes = power_classes(&f, d);
                for n in 1..=4usize {
                    let mut idx = vec![0usize; n];
                    loop {
                        let coeffs: Vec<Elem> = idx.iter().map(|&c| classes.reps[c]).collect();
                        let constructive = solve_diagonal(&f, &coeffs, d).is_ok();
                        let exhaustive = diagonal_solvable(&f, &coeffs, d);
                        assert_eq!(constructive, exhaustive);
                        let mut i = n;
                        let done = loop {
                            if i == 0 {
                                break true;
                            }
                            i -= 1;
                            if idx[i] + 1 < classes.n_classes() {
                                idx[i] += 1;
                                for s in idx.iter_mut().skip(i + 1) {
                                    *s = 0;
                                }
                                break false;
                            }
                        };
                        if done {
                            break;
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ext_field_decomposition() {
        let f3 = FqField::new(3, 1).unwrap();
        let ef = ExtField::new(&f3, 2).unwrap();
        assert_eq!(ef.ext.q(), 9);
        for u in ef.ext.elements() {
            let lam = ef.decompose(u);
            assert_eq!(lam.len(), 2);
        }
        // non-prime base
        let f4 = FqField::new(2, 2).unwrap();
        let ef = ExtField::new(&f4, 2).unwrap();
        assert_eq!(ef.ext.q(), 16);
    }
}
