//! Canonical text formats: field descriptors, elements, forms, systems,
//! and points. Rendering is canonical (terms in the fixed exponent
//! order), and parse/print round-trips are bit-exact. Parse errors carry
//! 1-based line and column positions.
//!
//! Grammar summary (see FORMAT.md for the full grammar):
//!   field      := "GF(" int [ "^" int ] [ ";" modpoly ] ")"
//!   modpoly    := modterm { "+" modterm }          (poly in x over F_p)
//!   element    := "[" int { "," int } "]" | int    (descending powers)
//!   form       := "poly" nvars degree ":" [ term { ";" term } ]
//!   term       := element e1 "," e2 "," ... "," en
//!   system     := "field" field NEWLINE { form NEWLINE }
//!   point      := "(" [ element { "," element } ] ")"

use crate::error::{Error, Result};
use crate::field::{Elem, FqField};
use crate::poly::{Form, FormTuple};

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::parse_at(line, col, msg)
}

/// Byte-offset cursor over a single line, tracking the column.
struct Line<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Line<'a> {
    fn new(s: &'a str, line: usize) -> Line<'a> {
        Line { s, pos: 0, line }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, lit: &str) -> Result<()> {
        self.skip_ws();
        if let Some(r) = self.rest().strip_prefix(lit) {
            self.pos = self.s.len() - r.len();
            Ok(())
        } else {
            Err(err(self.line, self.col(), format!("expected `{lit}`")))
        }
    }

    fn try_eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if let Some(r) = self.rest().strip_prefix(lit) {
            self.pos = self.s.len() - r.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(self.line, self.col(), "expected an integer"));
        }
        self.s[start..self.pos]
            .parse()
            .map_err(|_| err(self.line, start + 1, "integer out of range"))
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(err(self.line, self.col(), "unexpected trailing input"))
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Parse a modulus polynomial in `x` over `F_p`, e.g. `x^2+2x+1`, into
/// ascending coefficients.
fn parse_modpoly(cur: &mut Line, p: u32) -> Result<Vec<u32>> {
    let mut coeffs: Vec<u32> = Vec::new();
    loop {
        cur.skip_ws();
        let col = cur.col();
        let c = if cur.peek().is_some_and(|ch| ch.is_ascii_digit()) {
            let v = cur.int()?;
            if v >= p as u64 {
                return Err(err(cur.line, col, format!("modulus coefficient {v} not reduced mod {p}")));
            }
            v as u32
        } else {
            1
        };
        let deg = if cur.try_eat("x") {
            if cur.try_eat("^") {
                cur.int()? as usize
            } else {
                1
            }
        } else {
            0
        };
        if deg >= coeffs.len() {
            coeffs.resize(deg + 1, 0);
        }
        if coeffs[deg] != 0 {
            return Err(err(cur.line, col, format!("repeated degree {deg} in modulus")));
        }
        coeffs[deg] = c;
        if !cur.try_eat("+") {
            break;
        }
    }
    Ok(coeffs)
}

fn parse_field_cursor(cur: &mut Line) -> Result<FqField> {
    cur.eat("GF(")?;
    let col = cur.col();
    let first = cur.int()?;
    let (p, e) = if cur.try_eat("^") {
        if !is_prime(first) {
            return Err(err(cur.line, col, format!("{first} is not prime")));
        }
        (first as u32, cur.int()? as u32)
    } else if is_prime(first) {
        (first as u32, 1)
    } else {
        // composite order: factor as p^e
        let mut p = 0u64;
        for d in 2..=first {
            if first % d == 0 {
                p = d;
                break;
            }
        }
        let mut e = 0u32;
        let mut n = first;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if n != 1 {
            return Err(err(cur.line, col, format!("{first} is not a prime power")));
        }
        (p as u32, e)
    };
    if e == 0 {
        return Err(err(cur.line, col, "field exponent must be positive"));
    }
    let field = if cur.try_eat(";") {
        let modulus = parse_modpoly(cur, p)?;
        cur.eat(")")?;
        FqField::with_modulus(p, e, modulus)
    } else {
        cur.eat(")")?;
        FqField::new(p, e)
    };
    field.map_err(|fe| err(cur.line, col, format!("invalid field: {fe}")))
}

/// Parse a field descriptor such as `GF(7)`, `GF(3^2)`, `GF(9; x^2+1)`.
pub fn parse_field(s: &str) -> Result<FqField> {
    parse_field_at(s, 1)
}

/// `parse_field` with an explicit 1-based line number for errors.
pub fn parse_field_at(s: &str, line: usize) -> Result<FqField> {
    let mut cur = Line::new(s, line);
    let f = parse_field_cursor(&mut cur)?;
    cur.end()?;
    Ok(f)
}

/// Parse one element: `[c_{e-1},...,c_0]` (descending powers) or a bare
/// integer reduced into the prime subfield.
fn parse_elem_cursor(field: &FqField, cur: &mut Line) -> Result<Elem> {
    cur.skip_ws();
    let col = cur.col();
    if cur.try_eat("[") {
        let mut cs: Vec<u32> = Vec::new();
        if !cur.try_eat("]") {
            loop {
                let c = cur.int()?;
                if c >= field.p() as u64 {
                    return Err(err(cur.line, col, format!("coordinate {c} not reduced mod {}", field.p())));
                }
                cs.push(c as u32);
                if cur.try_eat("]") {
                    break;
                }
                cur.eat(",")?;
            }
        }
        if cs.len() != field.e() as usize {
            return Err(err(
                cur.line,
                col,
                format!("element needs {} coordinates over {}", field.e(), field.descriptor()),
            ));
        }
        cs.reverse();
        field.from_coords(&cs).map_err(|fe| err(cur.line, col, format!("{fe}")))
    } else {
        let v = cur.int()?;
        Ok(field.from_int(v))
    }
}

/// Parse an element in isolation.
pub fn parse_elem(field: &FqField, s: &str) -> Result<Elem> {
    let mut cur = Line::new(s, 1);
    let e = parse_elem_cursor(field, &mut cur)?;
    cur.end()?;
    Ok(e)
}

/// Canonical form line: `poly <nvars> <degree>: <coeff> <e1,...,en>; ...`
/// with terms in the fixed ascending exponent order.
pub fn render_form(field: &FqField, f: &Form) -> String {
    let terms: Vec<String> = f
        .terms()
        .map(|(exp, &c)| {
            let es: Vec<String> = exp.iter().map(|e| e.to_string()).collect();
            format!("{} {}", field.render(c), es.join(","))
        })
        .collect();
    if terms.is_empty() {
        format!("poly {} {}:", f.nvars(), f.degree())
    } else {
        format!("poly {} {}: {}", f.nvars(), f.degree(), terms.join("; "))
    }
}

/// Parse a canonical form line.
pub fn parse_form(field: &FqField, s: &str) -> Result<Form> {
    parse_form_at(field, s, 1)
}

/// `parse_form` with an explicit line number for errors.
pub fn parse_form_at(field: &FqField, s: &str, line: usize) -> Result<Form> {
    let mut cur = Line::new(s, line);
    cur.eat("poly")?;
    let nvars = cur.int()? as usize;
    if nvars > 255 {
        return Err(err(line, 1, "too many variables"));
    }
    let degree = cur.int()? as u32;
    if degree > 255 {
        return Err(err(line, 1, "degree too large"));
    }
    cur.eat(":")?;
    let mut terms: Vec<(Vec<u8>, Elem)> = Vec::new();
    cur.skip_ws();
    if !cur.rest().is_empty() {
        loop {
            let c = parse_elem_cursor(field, &mut cur)?;
            let mut exp = Vec::with_capacity(nvars);
            let ecol = cur.col();
            for i in 0..nvars {
                if i > 0 {
                    cur.eat(",")?;
                }
                let e = cur.int()?;
                if e > 255 {
                    return Err(err(line, ecol, "exponent too large"));
                }
                exp.push(e as u8);
            }
            terms.push((exp, c));
            if !cur.try_eat(";") {
                break;
            }
        }
    }
    cur.end()?;
    Form::new(nvars, degree, terms).map_err(|fe| err(line, 1, format!("{fe}")))
}

/// Canonical system text: a `field` header line followed by one form
/// line per form, in tuple order.
pub fn render_system(field: &FqField, ft: &FormTuple) -> String {
    let mut out = format!("field {}\n", field.descriptor());
    for f in ft.forms() {
        out.push_str(&render_form(field, f));
        out.push('\n');
    }
    out
}

/// Parse a system: field header plus form lines. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_system(text: &str) -> Result<(FqField, FormTuple)> {
    let mut field: Option<FqField> = None;
    let mut forms: Vec<Form> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("field ") {
            if field.is_some() {
                return Err(err(lineno, 1, "duplicate field header"));
            }
            field = Some(parse_field_at(rest.trim(), lineno)?);
        } else if line.starts_with("poly") {
            let f = field
                .as_ref()
                .ok_or_else(|| err(lineno, 1, "form before field header"))?;
            forms.push(parse_form_at(f, line, lineno)?);
        } else {
            return Err(err(lineno, 1, "expected `field` or `poly` line"));
        }
    }
    let field = field.ok_or_else(|| err(1, 1, "missing field header"))?;
    let nvars = forms.first().map_or(0, |f| f.nvars());
    let ft = FormTuple::new(nvars, forms).map_err(|fe| err(1, 1, format!("{fe}")))?;
    Ok((field, ft))
}

/// Canonical general-polynomial line: `gpoly <nvars>: <coeff> <exps>; ...`
/// (like a form line, but without a degree and without homogeneity).
pub fn render_gpoly(field: &FqField, g: &crate::poly::GenPoly) -> String {
    let terms: Vec<String> = g
        .terms()
        .map(|(exp, &c)| {
            let es: Vec<String> = exp.iter().map(|e| e.to_string()).collect();
            format!("{} {}", field.render(c), es.join(","))
        })
        .collect();
    if terms.is_empty() {
        format!("gpoly {}:", g.nvars())
    } else {
        format!("gpoly {}: {}", g.nvars(), terms.join("; "))
    }
}

/// Parse a `gpoly` line.
pub fn parse_gpoly(field: &FqField, s: &str) -> Result<crate::poly::GenPoly> {
    parse_gpoly_at(field, s, 1)
}

/// `parse_gpoly` with an explicit line number for errors.
pub fn parse_gpoly_at(field: &FqField, s: &str, line: usize) -> Result<crate::poly::GenPoly> {
    let mut cur = Line::new(s, line);
    cur.eat("gpoly")?;
    let nvars = cur.int()? as usize;
    if nvars > 255 {
        return Err(err(line, 1, "too many variables"));
    }
    cur.eat(":")?;
    let mut terms: Vec<(Vec<u8>, Elem)> = Vec::new();
    cur.skip_ws();
    if !cur.rest().is_empty() {
        loop {
            let c = parse_elem_cursor(field, &mut cur)?;
            let mut exp = Vec::with_capacity(nvars);
            for i in 0..nvars {
                if i > 0 {
                    cur.eat(",")?;
                }
                let e = cur.int()?;
                if e > 255 {
                    return Err(err(line, 1, "exponent too large"));
                }
                exp.push(e as u8);
            }
            terms.push((exp, c));
            if !cur.try_eat(";") {
                break;
            }
        }
    }
    cur.end()?;
    crate::poly::GenPoly::new(nvars, terms).map_err(|fe| err(line, 1, format!("{fe}")))
}

/// Canonical point rendering: `([a], [b], ...)`.
pub fn render_point(field: &FqField, v: &[Elem]) -> String {
    field.render_vector(v)
}

/// Parse a point `([a], [b], ...)`.
pub fn parse_point(field: &FqField, s: &str) -> Result<Vec<Elem>> {
    parse_point_at(field, s, 1)
}

/// `parse_point` with an explicit line number for errors.
pub fn parse_point_at(field: &FqField, s: &str, line: usize) -> Result<Vec<Elem>> {
    let mut cur = Line::new(s, line);
    cur.eat("(")?;
    let mut v = Vec::new();
    if !cur.try_eat(")") {
        loop {
            v.push(parse_elem_cursor(field, &mut cur)?);
            if cur.try_eat(")") {
                break;
            }
            cur.eat(",")?;
        }
    }
    cur.end()?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trip() {
        for desc in ["GF(2)", "GF(7)", "GF(3^2; x^2+1)", "GF(2^2; x^2+x+1)"] {
            let f = parse_field(desc).unwrap();
            assert_eq!(f.descriptor(), desc);
        }
        // alternate spellings accepted
        assert_eq!(parse_field("GF(9)").unwrap().descriptor(), "GF(3^2; x^2+1)");
        assert_eq!(parse_field("GF(3^2)").unwrap().q(), 9);
        assert_eq!(parse_field("GF(9; x^2+1)").unwrap().q(), 9);
        assert!(parse_field("GF(6)").is_err());
        assert!(parse_field("GF(4^2)").is_err());
        assert!(parse_field("GF(9; x^2+x)").is_err());
        assert!(parse_field("GF(7) junk").is_err());
    }

    #[test]
    fn parse_error_positions() {
        match parse_field("GF(x)") {
            Err(Error::Parse { line, col, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(col, 4);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn elem_round_trip() {
        let f9 = parse_field("GF(9)").unwrap();
        for a in f9.elements() {
            assert_eq!(parse_elem(&f9, &f9.render(a)).unwrap(), a);
        }
        let f7 = parse_field("GF(7)").unwrap();
        assert_eq!(parse_elem(&f7, "10").unwrap(), f7.from_int(10));
        assert_eq!(parse_elem(&f7, "[3]").unwrap(), 3);
        assert!(parse_elem(&f7, "[7]").is_err());
        assert!(parse_elem(&f9, "[1]").is_err());
    }

    #[test]
    fn form_round_trip() {
        let f = parse_field("GF(5)").unwrap();
        let line = "poly 3 2: [2] 0,0,2; [4] 1,1,0; [1] 2,0,0";
        let form = parse_form(&f, line).unwrap();
        assert_eq!(render_form(&f, &form), line);
        // zero form
        let z = parse_form(&f, "poly 4 3:").unwrap();
        assert!(z.is_zero());
        assert_eq!(render_form(&f, &z), "poly 4 3:");
        // non-homogeneous rejected
        assert!(parse_form(&f, "poly 2 2: [1] 1,0").is_err());
    }

    #[test]
    fn system_round_trip() {
        let text = "field GF(3)\npoly 3 2: [1] 0,0,2; [1] 0,2,0; [1] 2,0,0\n";
        let (field, ft) = parse_system(text).unwrap();
        assert_eq!(ft.len(), 1);
        assert_eq!(render_system(&field, &ft), text);
        assert!(parse_system("poly 1 1: [1] 1\n").is_err());
        assert!(parse_system("field GF(3)\nfield GF(5)\n").is_err());
        assert!(parse_system("field GF(3)\nnonsense\n").is_err());
    }

    #[test]
    fn point_round_trip() {
        let f = parse_field("GF(3^2; x^2+1)").unwrap();
        let v = vec![0 as Elem, 1, 5, 8];
        let s = render_point(&f, &v);
        assert_eq!(parse_point(&f, &s).unwrap(), v);
        assert_eq!(parse_point(&f, "()").unwrap(), Vec::<Elem>::new());
        assert!(parse_point(&f, "(1,").is_err());
    }
}
