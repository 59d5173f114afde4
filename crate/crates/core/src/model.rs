//! The `.ode` text format and its validated in-memory representation.
//!
//! A model file is line oriented:
//!
//! ```text
//! model lotka_volterra
//! states x1, x2
//! params a, b, c, d
//! inputs u1          # section optional
//! outputs y1
//! x1' = a*x1 - b*x1*x2
//! x2' = -c*x2 + d*x1*x2
//! y1 = x1
//! ```
//!
//! Expressions use `+ - * / ^` with non-negative integer exponents, integer
//! literals and parentheses; `#` starts a comment; LF and CRLF both parse.
//! Primes are only legal on the left-hand side of a state equation.

use crate::error::{Error, ParseError, Result};
use crate::poly::{poly_gcd, Poly, Rat};
use crate::ratfun::RatFun;
use crate::vars::{VarId, VarKind, VarSpace};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Parametric rational ODE model: x' = f(x, p, u), y = g(x, p, u).
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub name: String,
    pub vars: VarSpace,
    pub states: Vec<VarId>,
    pub params: Vec<VarId>,
    pub inputs: Vec<VarId>,
    pub outputs: Vec<VarId>,
    /// Right-hand side per state, same order as `states`.
    pub rhs: Vec<RatFun>,
    /// Observation per output, same order as `outputs`.
    pub obs: Vec<RatFun>,
}

impl PartialEq for VarSpace {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .ids()
                .all(|id| self.name(id) == other.name(id) && self.kind(id) == other.kind(id))
    }
}

impl Model {
    pub fn parse(source: &str) -> Result<Model> {
        Parser::new(source).parse_model()
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn rhs_of(&self, state: VarId) -> &RatFun {
        let i = self
            .states
            .iter()
            .position(|&s| s == state)
            .expect("state of this model");
        &self.rhs[i]
    }

    /// SHA-256 of the canonical rendering, as a hex string.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(render_model(self).as_bytes());
        let out = h.finalize();
        let mut s = String::with_capacity(64);
        for b in out {
            let _ = write!(s, "{b:02x}");
        }
        s
    }
}

/// Least common multiple (up to a constant) of the parameter-denominators of
/// all coefficients in the right-hand sides and observations, as a polynomial
/// in the parameters only.
///
/// Each rational right-hand side is viewed as a fraction of polynomials in
/// states and inputs whose coefficients are rational in the parameters; the
/// parameter content of the denominator is what a coefficient denominator
/// contributes.
pub fn common_denominator(m: &Model) -> Poly {
    let mut c = Poly::one();
    for f in m.rhs.iter().chain(m.obs.iter()) {
        let den_content = param_content(f.den(), m);
        if den_content.as_constant().is_some() {
            continue;
        }
        let g = poly_gcd(&c, &den_content);
        c = c.mul(&den_content).divexact(&g).primitive();
    }
    c
}

/// Gcd over the (state, input)-monomial groups of `p`, as a parameter polynomial.
fn param_content(p: &Poly, m: &Model) -> Poly {
    let is_param = |v: VarId| m.params.contains(&v);
    let mut groups: BTreeMap<crate::poly::Monomial, Poly> = BTreeMap::new();
    for (mono, coeff) in p.terms() {
        let (param_part, rest_part): (Vec<_>, Vec<_>) =
            mono.pairs().iter().copied().partition(|&(v, _)| is_param(v));
        groups
            .entry(crate::poly::Monomial::from_pairs(rest_part))
            .or_insert_with(Poly::zero)
            .add_term(crate::poly::Monomial::from_pairs(param_part), coeff.clone());
    }
    let mut g = Poly::zero();
    for coeff in groups.values() {
        g = poly_gcd(&g, coeff);
        if g.as_constant().map(|k| num::One::is_one(&k)).unwrap_or(false) {
            break;
        }
    }
    g
}

/// Canonical rendering; `parse(render(m))` is structurally equal to `m`.
pub fn render_model(m: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {}", m.name);
    let names = |ids: &[VarId]| {
        ids.iter()
            .map(|&v| m.vars.name(v).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(out, "states {}", names(&m.states));
    let _ = writeln!(out, "params {}", names(&m.params));
    if !m.inputs.is_empty() {
        let _ = writeln!(out, "inputs {}", names(&m.inputs));
    }
    let _ = writeln!(out, "outputs {}", names(&m.outputs));
    for (i, &s) in m.states.iter().enumerate() {
        let _ = writeln!(out, "{}' = {}", m.vars.name(s), m.rhs[i].render(&m.vars));
    }
    for (i, &y) in m.outputs.iter().enumerate() {
        let _ = writeln!(out, "{} = {}", m.vars.name(y), m.obs[i].render(&m.vars));
    }
    out
}

// ---------------------------------------------------------------------------
// lexer / parser
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Prime,
    Equals,
    Comma,
    Eol,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(source: &str) -> std::result::Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (lineno, raw_line) in source.lines().enumerate() {
        let line = raw_line.trim_end_matches('\r');
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let bytes: Vec<char> = line.chars().collect();
        let mut i = 0usize;
        while i < bytes.len() {
            let c = bytes[i];
            let col = i + 1;
            let simple = |tok| Spanned {
                tok,
                line: lineno + 1,
                col,
            };
            match c {
                ' ' | '\t' => {
                    i += 1;
                    continue;
                }
                '+' => out.push(simple(Tok::Plus)),
                '-' => out.push(simple(Tok::Minus)),
                '*' => out.push(simple(Tok::Star)),
                '/' => out.push(simple(Tok::Slash)),
                '^' => out.push(simple(Tok::Caret)),
                '(' => out.push(simple(Tok::LParen)),
                ')' => out.push(simple(Tok::RParen)),
                '\'' => out.push(simple(Tok::Prime)),
                '=' => out.push(simple(Tok::Equals)),
                ',' => out.push(simple(Tok::Comma)),
                _ if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                        i += 1;
                    }
                    out.push(Spanned {
                        tok: Tok::Ident(bytes[start..i].iter().collect()),
                        line: lineno + 1,
                        col: start + 1,
                    });
                    continue;
                }
                _ if c.is_ascii_digit() => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    out.push(Spanned {
                        tok: Tok::Int(bytes[start..i].iter().collect()),
                        line: lineno + 1,
                        col: start + 1,
                    });
                    continue;
                }
                other => {
                    return Err(ParseError {
                        line: lineno + 1,
                        column: col,
                        message: format!("unexpected character `{other}`"),
                        expected: vec![],
                    });
                }
            }
            i += 1;
        }
        if !out.is_empty() && !matches!(out.last().map(|s| &s.tok), Some(Tok::Eol)) {
            out.push(Spanned {
                tok: Tok::Eol,
                line: lineno + 1,
                col: bytes.len() + 1,
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    lex_error: Option<ParseError>,
}

impl Parser {
    fn new(source: &str) -> Parser {
        match lex(source) {
            Ok(toks) => Parser {
                toks,
                pos: 0,
                lex_error: None,
            },
            Err(e) => Parser {
                toks: Vec::new(),
                pos: 0,
                lex_error: Some(e),
            },
        }
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, message: impl Into<String>, expected: &[&str]) -> Error {
        let (line, column) = self.here();
        Error::Parse(ParseError {
            line,
            column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect_ident(&mut self, what: &str) -> Result<String> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(s), ..
            }) => Ok(s),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected {what}"), &["identifier"]))
            }
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<()> {
        match self.next() {
            Some(s) if s.tok == tok => Ok(()),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected `{name}`"), &[name]))
            }
        }
    }

    fn skip_eols(&mut self) {
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::Eol)) {
            self.pos += 1;
        }
    }

    fn ident_list(&mut self, what: &str) -> Result<Vec<String>> {
        let mut names = vec![self.expect_ident(what)?];
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::Comma)) {
            self.pos += 1;
            names.push(self.expect_ident(what)?);
        }
        self.expect(Tok::Eol, "end of line")?;
        Ok(names)
    }

    fn parse_model(&mut self) -> Result<Model> {
        if let Some(e) = self.lex_error.take() {
            return Err(Error::Parse(e));
        }
        self.skip_eols();
        // header
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(kw),
                ..
            }) if kw == "model" => {}
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.err("expected `model <name>` header", &["model"]));
            }
        }
        let name = self.expect_ident("model name")?;
        self.expect(Tok::Eol, "end of line")?;

        let mut vars = VarSpace::new();
        let mut states = Vec::new();
        let mut params = Vec::new();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();

        let mut saw = BTreeMap::new();
        loop {
            self.skip_eols();
            let kw = match self.peek() {
                Some(Spanned {
                    tok: Tok::Ident(s), ..
                }) if ["states", "params", "inputs", "outputs"].contains(&s.as_str()) => s.clone(),
                _ => break,
            };
            self.pos += 1;
            if saw.insert(kw.clone(), ()).is_some() {
                return Err(Error::Validation(format!("duplicate `{kw}` section")));
            }
            let names = self.ident_list(&format!("{kw} name"))?;
            let (kind, bucket): (VarKind, &mut Vec<VarId>) = match kw.as_str() {
                "states" => (VarKind::State, &mut states),
                "params" => (VarKind::Param, &mut params),
                "inputs" => (VarKind::Input, &mut inputs),
                _ => (VarKind::Output, &mut outputs),
            };
            for n in names {
                let id = vars
                    .intern(&n, kind.clone())
                    .map_err(Error::Validation)?;
                bucket.push(id);
            }
        }
        if states.is_empty() {
            return Err(Error::Validation("no `states` section".into()));
        }
        if outputs.is_empty() {
            return Err(Error::Validation("no `outputs` section".into()));
        }

        // equations
        let mut rhs: Vec<Option<RatFun>> = vec![None; states.len()];
        let mut obs: Vec<Option<RatFun>> = vec![None; outputs.len()];
        loop {
            self.skip_eols();
            if self.peek().is_none() {
                break;
            }
            let (line, _) = self.here();
            let lhs = self.expect_ident("state or output name")?;
            let id = vars.lookup(&lhs).ok_or_else(|| {
                Error::Validation(format!("line {line}: unknown identifier `{lhs}`"))
            })?;
            let primed = if matches!(self.peek().map(|s| &s.tok), Some(Tok::Prime)) {
                self.pos += 1;
                true
            } else {
                false
            };
            self.expect(Tok::Equals, "=")?;
            let expr = self.parse_expr(&vars, &params, &states, &inputs)?;
            self.expect(Tok::Eol, "end of line")?;
            match (vars.kind(id).clone(), primed) {
                (VarKind::State, true) => {
                    let i = states.iter().position(|&s| s == id).unwrap();
                    if rhs[i].replace(expr).is_some() {
                        return Err(Error::Validation(format!(
                            "line {line}: duplicate equation for state `{lhs}`"
                        )));
                    }
                }
                (VarKind::Output, false) => {
                    let i = outputs.iter().position(|&o| o == id).unwrap();
                    if obs[i].replace(expr).is_some() {
                        return Err(Error::Validation(format!(
                            "line {line}: duplicate equation for output `{lhs}`"
                        )));
                    }
                }
                (VarKind::Input, _) => {
                    return Err(Error::Validation(format!(
                        "line {line}: inputs cannot be defined by equations \
                         (derivative of input `{lhs}` is not allowed)"
                    )));
                }
                (VarKind::State, false) => {
                    return Err(Error::Validation(format!(
                        "line {line}: state `{lhs}` must be defined as `{lhs}' = ...`"
                    )));
                }
                (VarKind::Output, true) => {
                    return Err(Error::Validation(format!(
                        "line {line}: output `{lhs}` cannot carry a derivative"
                    )));
                }
                _ => {
                    return Err(Error::Validation(format!(
                        "line {line}: `{lhs}` is a parameter and cannot be defined"
                    )));
                }
            }
        }
        let rhs: Vec<RatFun> = rhs
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    Error::Validation(format!(
                        "missing equation for state `{}`",
                        vars.name(states[i])
                    ))
                })
            })
            .collect::<Result<_>>()?;
        let obs: Vec<RatFun> = obs
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| {
                    Error::Validation(format!(
                        "missing equation for output `{}`",
                        vars.name(outputs[i])
                    ))
                })
            })
            .collect::<Result<_>>()?;

        Ok(Model {
            name,
            vars,
            states,
            params,
            inputs,
            outputs,
            rhs,
            obs,
        })
    }

    fn parse_expr(
        &mut self,
        vars: &VarSpace,
        params: &[VarId],
        states: &[VarId],
        inputs: &[VarId],
    ) -> Result<RatFun> {
        let mut acc = self.parse_term(vars, params, states, inputs)?;
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term(vars, params, states, inputs)?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.parse_term(vars, params, states, inputs)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(
        &mut self,
        vars: &VarSpace,
        params: &[VarId],
        states: &[VarId],
        inputs: &[VarId],
    ) -> Result<RatFun> {
        let mut acc = self.parse_factor(vars, params, states, inputs)?;
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.parse_factor(vars, params, states, inputs)?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let (line, col) = self.here();
                    let d = self.parse_factor(vars, params, states, inputs)?;
                    acc = acc.div(&d).map_err(|_| {
                        Error::Validation(format!("line {line}:{col}: division by zero"))
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(
        &mut self,
        vars: &VarSpace,
        params: &[VarId],
        states: &[VarId],
        inputs: &[VarId],
    ) -> Result<RatFun> {
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(self.parse_factor(vars, params, states, inputs)?.neg());
        }
        let base = self.parse_atom(vars, params, states, inputs)?;
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Caret)) {
            self.pos += 1;
            match self.next() {
                Some(Spanned {
                    tok: Tok::Int(n), ..
                }) => {
                    let e: u32 = n
                        .parse()
                        .map_err(|_| self.err("exponent too large", &["small integer"]))?;
                    return Ok(base.pow(e));
                }
                Some(Spanned {
                    tok: Tok::Minus,
                    line,
                    ..
                }) => {
                    return Err(Error::Validation(format!(
                        "line {line}: negative exponents are not allowed"
                    )));
                }
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.err("expected integer exponent", &["integer"]));
                }
            }
        }
        Ok(base)
    }

    fn parse_atom(
        &mut self,
        vars: &VarSpace,
        params: &[VarId],
        states: &[VarId],
        inputs: &[VarId],
    ) -> Result<RatFun> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                let id = vars.lookup(&name).ok_or_else(|| {
                    Error::Validation(format!(
                        "line {line}:{col}: unknown identifier `{name}`"
                    ))
                })?;
                let usable = params.contains(&id) || states.contains(&id) || inputs.contains(&id);
                if !usable {
                    return Err(Error::Validation(format!(
                        "line {line}:{col}: `{name}` is an output and cannot appear \
                         in a right-hand side"
                    )));
                }
                Ok(RatFun::var(id))
            }
            Some(Spanned {
                tok: Tok::Int(n), ..
            }) => {
                let v: num::BigInt = n.parse().expect("digits parse");
                Ok(RatFun::constant(Rat::from_integer(v)))
            }
            Some(Spanned {
                tok: Tok::LParen, ..
            }) => {
                let inner = self.parse_expr(vars, params, states, inputs)?;
                self.expect(Tok::RParen, ")")?;
                Ok(inner)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("expected expression", &["identifier", "integer", "("]))
            }
        }
    }
}

/// Parses a bare expression against an existing variable space. Used for
/// reading back transform artifacts and report fragments.
pub fn parse_expression(source: &str, vars: &VarSpace) -> Result<RatFun> {
    let mut p = Parser::new(source);
    if let Some(e) = p.lex_error.take() {
        return Err(Error::Parse(e));
    }
    let all: Vec<VarId> = vars.ids().collect();
    let expr = p.parse_expr(vars, &all, &[], &[])?;
    match p.peek().map(|s| &s.tok) {
        None | Some(Tok::Eol) => Ok(expr),
        _ => Err(p.err("trailing input after expression", &[])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    const LV: &str = "\
model lotka_volterra
states x1, x2
params a, b, c, d
outputs y1
x1' = a*x1 - b*x1*x2
x2' = -c*x2 + d*x1*x2
y1 = x1
";

    #[test]
    fn parses_lotka_volterra() {
        let m = Model::parse(LV).unwrap();
        assert_eq!(m.name, "lotka_volterra");
        assert_eq!(m.states.len(), 2);
        assert_eq!(m.params.len(), 4);
        assert!(m.inputs.is_empty());
        let (x1, x2) = (m.states[0], m.states[1]);
        let (a, b) = (m.params[0], m.params[1]);
        let expect = RatFun::from_poly(
            Poly::var(a)
                .mul(&Poly::var(x1))
                .sub(&Poly::var(b).mul(&Poly::var(x1)).mul(&Poly::var(x2))),
        );
        assert_eq!(m.rhs[0], expect);
        assert_eq!(m.obs[0], RatFun::var(x1));
    }

    #[test]
    fn parses_harmonic_oscillator() {
        let src = "\
model harmonic
states x1, x2
params a, b
outputs y1
x1' = a*x2
x2' = b*x1
y1 = x1
";
        let m = Model::parse(src).unwrap();
        let (x1, x2) = (m.states[0], m.states[1]);
        let (a, b) = (m.params[0], m.params[1]);
        assert_eq!(
            m.rhs[0],
            RatFun::from_poly(Poly::var(a).mul(&Poly::var(x2)))
        );
        assert_eq!(
            m.rhs[1],
            RatFun::from_poly(Poly::var(b).mul(&Poly::var(x1)))
        );
    }

    #[test]
    fn undeclared_identifier_is_validation_error() {
        let src = "\
model bad
states x1
params a
outputs y1
x1' = a*z
y1 = x1
";
        match Model::parse(src) {
            Err(Error::Validation(msg)) => assert!(msg.contains("unknown identifier `z`")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn input_derivative_rejected() {
        let src = "\
model bad
states x1
params a
inputs u1
outputs y1
x1' = a*x1
u1' = x1
y1 = x1
";
        assert!(matches!(Model::parse(src), Err(Error::Validation(_))));
    }

    #[test]
    fn syntax_error_is_positioned() {
        let src = "model m\nstates x1\nparams a\noutputs y1\nx1' = a *\ny1 = x1\n";
        match Model::parse(src) {
            Err(Error::Parse(e)) => assert_eq!(e.line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn negative_exponent_rejected() {
        let src = "\
model m
states x1
params a
outputs y1
x1' = a*x1^-2
y1 = x1
";
        assert!(matches!(Model::parse(src), Err(Error::Validation(_))));
    }

    #[test]
    fn round_trip_lv() {
        let m = Model::parse(LV).unwrap();
        let again = Model::parse(&render_model(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn round_trip_nested_fractions() {
        let src = "\
model goodwinish
states x1, x2
params b, c
outputs y1
x1' = -b*x1 + 1/(c + x2)
x2' = x1/(x2*(c + x2))
y1 = x1
";
        let m = Model::parse(src).unwrap();
        let again = Model::parse(&render_model(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn common_denominator_examples() {
        let m = Model::parse(LV).unwrap();
        assert_eq!(common_denominator(&m), Poly::one());

        // rhs (1/beta) * x1 -> denominator beta
        let src = "\
model scaled
states x1
params beta
outputs y1
x1' = (1/beta)*x1
y1 = x1
";
        let m = Model::parse(src).unwrap();
        assert_eq!(common_denominator(&m), Poly::var(m.params[0]));

        // state denominators are not parameter-coefficient denominators
        let src = "\
model stdenom
states x1, x2
params b, c
outputs y1
x1' = -b*x1 + 1/(c + x2)
x2' = x1/x2
y1 = x1
";
        let m = Model::parse(src).unwrap();
        assert_eq!(common_denominator(&m), Poly::one());
    }

    #[test]
    fn rational_literals_are_exact() {
        let src = "\
model halves
states x1
params a
outputs y1
x1' = (1/2)*a*x1
y1 = x1
";
        let m = Model::parse(src).unwrap();
        let (x1, a) = (m.states[0], m.params[0]);
        assert_eq!(
            m.rhs[0],
            RatFun::from_poly(
                Poly::var(a)
                    .mul(&Poly::var(x1))
                    .scale(&crate::poly::rat_frac(1, 2))
            )
        );
        let _ = rat(0);
    }

    #[test]
    fn parser_never_panics_on_noise() {
        use proptest::prelude::*;
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
            cases: 128,
            ..ProptestConfig::default()
        });
        runner
            .run(&"[ -~]{0,80}", |s| {
                let _ = Model::parse(&s);
                Ok(())
            })
            .unwrap();
    }
}
