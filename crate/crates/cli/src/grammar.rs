//! Flag-value grammars for symbols and weight presets.
//!
//! `clap` only sees opaque strings for `--symbol` and `--weights`; the
//! grammars below are tiny hand-rolled scanners so that a rejected value can
//! report the exact byte offset and the tokens that would have been accepted
//! there, instead of a generic "invalid value".
//!
//! Symbol grammar:
//!
//! ```text
//! symbol     := "psi1" | "psi2" | "psi1^n:" int
//!             | "mobius:theta=" float ",z0=" complex
//!             | "hyperbolic:r=" float
//!             | "blaschke:zeros=" complex ("," complex)* ",theta=" float
//!             | "poly:coeffs=" complex ("," complex)*
//! complex    := float | float "i" | float ("+"|"-") float "i"
//! ```
//!
//! Weight grammar:
//!
//! ```text
//! weights    := ("inverse:" | "tilde:")* base
//! base       := "hardy" | "dirichlet:lambda=" float | "dn1:n=" int
//!             | "dn2:n=" int | "custom:file=" path
//! ```
//!
//! A `custom:` file holds one decimal weight per line (UTF-8); blank lines
//! are ignored. Prefixes compose right to left: `inverse:tilde:hardy` lifts
//! first, then inverts.

use std::fmt;

use compop::moebius::{disk_automorphism, special, Moebius, Special};
use compop::series::{blaschke_taylor, TruncatedSeries};
use compop::weights::WeightSequence;
use compop::C64;

/// Parse failure for a `--symbol` or `--weights` value.
#[derive(Debug)]
pub enum ParseError {
    /// The scanner stopped: byte position, acceptable tokens, and what was
    /// actually found there.
    Grammar { input: String, pos: usize, expected: String },
    /// The text scanned fine but the value is unusable (range violations,
    /// unreadable files, non-self-maps); the message is final.
    Invalid(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Grammar { input, pos, expected } => {
                let found = &input[*pos..];
                let found = if found.is_empty() {
                    "end of input".to_string()
                } else {
                    let end = found
                        .char_indices()
                        .take(12)
                        .last()
                        .map(|(i, c)| i + c.len_utf8())
                        .unwrap_or(found.len());
                    format!("'{}'", &found[..end])
                };
                write!(f, "at byte {pos} in '{input}': expected {expected}, found {found}")
            }
            ParseError::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for ParseError {}

impl From<compop::Error> for ParseError {
    fn from(e: compop::Error) -> Self {
        ParseError::Invalid(e.to_string())
    }
}

/// Byte-position scanner over one flag value.
struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos == self.input.len()
    }

    /// Consume `lit` if it is next; report whether it was.
    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Grammar {
            input: self.input.to_string(),
            pos: self.pos,
            expected: expected.to_string(),
        })
    }

    /// Consume `lit` or fail listing it.
    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.fail(&format!("'{lit}'"))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }

    /// Longest prefix shaped like a (signed) decimal float, exponent allowed.
    /// Stops before a trailing `i` so complex parsing can claim it.
    fn float(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let bytes = self.input.as_bytes();
        let mut i = self.pos;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i == digits_start {
            return self.fail("a number");
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let exp_digits = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_digits {
                i = j;
            }
        }
        let text = &self.input[start..i];
        match text.parse::<f64>() {
            Ok(v) => {
                self.pos = i;
                Ok(v)
            }
            Err(_) => self.fail("a number"),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let bytes = self.input.as_bytes();
        let mut i = self.pos;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return self.fail("an integer");
        }
        match self.input[start..i].parse::<i64>() {
            Ok(v) => {
                self.pos = i;
                Ok(v)
            }
            Err(_) => self.fail("an integer in range"),
        }
    }

    /// `a`, `bi`, or `a±bi` (also bare `i` / `-i` after a sign-less float
    /// fails — the grammar always wants an explicit coefficient).
    fn complex(&mut self) -> Result<C64, ParseError> {
        let first = self.float()?;
        if self.eat("i") {
            return Ok(C64::new(0.0, first));
        }
        if self.rest().starts_with('+') || self.rest().starts_with('-') {
            // The sign belongs to the imaginary part; `float` re-reads it.
            let second = self.float()?;
            if self.eat("i") {
                return Ok(C64::new(first, second));
            }
            return self.fail("'i' after the imaginary part");
        }
        Ok(C64::new(first, 0.0))
    }
}

/// A parsed `--symbol` value: the analytic self-map a command operates on.
#[derive(Clone, Debug)]
pub enum Symbol {
    /// Möbius maps get fast sections and exact classification.
    Moebius { map: Moebius<C64>, text: String },
    /// Finite Blaschke product given by zeros and a rotation.
    Blaschke { zeros: Vec<C64>, theta: f64, text: String },
    /// Explicit polynomial coefficients, constant term first.
    Poly { coeffs: Vec<C64>, text: String },
}

impl Symbol {
    /// The original grammar text (used in artifacts, so reports echo the
    /// exact input that produced them).
    pub fn describe(&self) -> &str {
        match self {
            Symbol::Moebius { text, .. } | Symbol::Blaschke { text, .. } | Symbol::Poly { text, .. } => text,
        }
    }

    /// The underlying Möbius map, when the symbol is one.
    pub fn as_moebius(&self) -> Option<&Moebius<C64>> {
        match self {
            Symbol::Moebius { map, .. } => Some(map),
            _ => None,
        }
    }

    /// Realize the symbol as a truncated series carrying at least `min_len`
    /// coefficients. Polynomials keep their exact length (padding or
    /// truncating a polynomial would change the symbol).
    pub fn series(&self, min_len: usize) -> Result<TruncatedSeries<C64>, ParseError> {
        let n = min_len.max(2);
        match self {
            Symbol::Moebius { map, .. } => Ok(map.taylor(n - 1)?),
            Symbol::Blaschke { zeros, theta, .. } => Ok(blaschke_taylor(zeros, *theta, n - 1)?),
            Symbol::Poly { coeffs, .. } => Ok(TruncatedSeries::from_coeffs(coeffs.clone())),
        }
    }
}

const SYMBOL_HEADS: &str = "one of 'psi1', 'psi2', 'psi1^n:', 'mobius:', 'hyperbolic:', 'blaschke:', 'poly:'";

/// Parse a `--symbol` value.
pub fn parse_symbol(input: &str) -> Result<Symbol, ParseError> {
    let mut c = Cursor::new(input);
    let text = input.to_string();

    if c.eat("psi1^n:") {
        let n = c.integer()?;
        c.expect_end()?;
        let map = special(Special::Psi1).iterate(n);
        return Ok(Symbol::Moebius { map, text });
    }
    if c.eat("psi1") {
        c.expect_end()?;
        return Ok(Symbol::Moebius { map: special(Special::Psi1), text });
    }
    if c.eat("psi2") {
        c.expect_end()?;
        return Ok(Symbol::Moebius { map: special(Special::Psi2), text });
    }
    if c.eat("mobius:") {
        c.expect("theta=")?;
        let theta = c.float()?;
        c.expect(",z0=")?;
        let z0 = c.complex()?;
        c.expect_end()?;
        let map = disk_automorphism(theta, z0)?;
        return Ok(Symbol::Moebius { map, text });
    }
    if c.eat("hyperbolic:") {
        c.expect("r=")?;
        let r = c.float()?;
        c.expect_end()?;
        if !(r > 0.0 && r < 1.0) {
            return Err(ParseError::Invalid(format!(
                "hyperbolic pull needs r in (0, 1), got {r}"
            )));
        }
        let map = Moebius {
            a: C64::new(1.0, 0.0),
            b: C64::new(r, 0.0),
            c: C64::new(r, 0.0),
            d: C64::new(1.0, 0.0),
        };
        return Ok(Symbol::Moebius { map, text });
    }
    if c.eat("blaschke:") {
        c.expect("zeros=")?;
        let mut zeros = vec![c.complex()?];
        let theta = loop {
            if c.eat(",theta=") {
                break c.float()?;
            }
            if c.eat(",") {
                zeros.push(c.complex()?);
            } else {
                return c.fail("',' before another zero or ',theta='");
            }
        };
        c.expect_end()?;
        for z in &zeros {
            if z.norm() >= 1.0 {
                return Err(ParseError::Invalid(format!(
                    "Blaschke zeros must lie inside the unit disk; |{}+{}i| >= 1",
                    z.re, z.im
                )));
            }
        }
        return Ok(Symbol::Blaschke { zeros, theta, text });
    }
    if c.eat("poly:") {
        c.expect("coeffs=")?;
        let mut coeffs = vec![c.complex()?];
        while c.eat(",") {
            coeffs.push(c.complex()?);
        }
        c.expect_end()?;
        return Ok(Symbol::Poly { coeffs, text });
    }
    c.fail(SYMBOL_HEADS)
}

const WEIGHT_HEADS: &str =
    "one of 'hardy', 'dirichlet:lambda=', 'dn1:n=', 'dn2:n=', 'custom:file=', 'inverse:', 'tilde:'";

/// Parse a `--weights` value into a ready weight sequence.
pub fn parse_weights(input: &str) -> Result<WeightSequence, ParseError> {
    enum Prefix {
        Inverse,
        Tilde,
    }
    let mut c = Cursor::new(input);
    let mut prefixes = Vec::new();
    loop {
        if c.eat("inverse:") {
            prefixes.push(Prefix::Inverse);
        } else if c.eat("tilde:") {
            prefixes.push(Prefix::Tilde);
        } else {
            break;
        }
    }

    let base = if c.eat("hardy") {
        c.expect_end()?;
        WeightSequence::hardy()
    } else if c.eat("dirichlet:") {
        c.expect("lambda=")?;
        let lambda = c.float()?;
        c.expect_end()?;
        WeightSequence::dirichlet(lambda)?
    } else if c.eat("dn1:") {
        c.expect("n=")?;
        let n = c.integer()?;
        c.expect_end()?;
        let n = u32::try_from(n)
            .map_err(|_| ParseError::Invalid(format!("dn1 order must be nonnegative, got {n}")))?;
        WeightSequence::dn1(n)
    } else if c.eat("dn2:") {
        c.expect("n=")?;
        let n = c.integer()?;
        c.expect_end()?;
        let n = u32::try_from(n)
            .map_err(|_| ParseError::Invalid(format!("dn2 order must be nonnegative, got {n}")))?;
        WeightSequence::dn2(n)
    } else if c.eat("custom:") {
        c.expect("file=")?;
        let path = c.rest();
        if path.is_empty() {
            return c.fail("a file path");
        }
        let body = std::fs::read_to_string(path).map_err(|e| {
            ParseError::Invalid(format!("cannot read weight file '{path}': {e}"))
        })?;
        let mut head = Vec::new();
        for (lineno, line) in body.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                ParseError::Invalid(format!(
                    "weight file '{path}' line {}: expected a decimal weight, found '{line}'",
                    lineno + 1
                ))
            })?;
            head.push(v);
        }
        WeightSequence::custom(head)?
    } else {
        return c.fail(WEIGHT_HEADS);
    };

    // Rightmost prefix binds tightest: apply in reverse declaration order.
    let mut w = base;
    for p in prefixes.iter().rev() {
        w = match p {
            Prefix::Inverse => w.inverse(),
            Prefix::Tilde => w.tilde_lift(),
        };
    }
    Ok(w)
}

/// Parse one complex literal (used by flags like `--z0` and `--xi`).
pub fn parse_complex_flag(input: &str) -> Result<C64, ParseError> {
    let mut c = Cursor::new(input);
    let z = c.complex()?;
    c.expect_end()?;
    Ok(z)
}

/// Parse a comma-separated list of real numbers (grid flags).
pub fn parse_float_list(input: &str) -> Result<Vec<f64>, ParseError> {
    let mut c = Cursor::new(input);
    let mut out = vec![c.float()?];
    while c.eat(",") {
        out.push(c.float()?);
    }
    c.expect_end()?;
    Ok(out)
}

/// Parse a comma-separated list of complex numbers (grid flags).
pub fn parse_complex_list(input: &str) -> Result<Vec<C64>, ParseError> {
    let mut c = Cursor::new(input);
    let mut out = vec![c.complex()?];
    while c.eat(",") {
        out.push(c.complex()?);
    }
    c.expect_end()?;
    Ok(out)
}

/// Format a complex value the way the grammar would accept it back.
pub fn complex_text(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
