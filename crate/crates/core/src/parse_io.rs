//! Text formats: polynomials, `.ideal` files, Betti grids and JSON reports.
//!
//! Polynomial grammar (ASCII only):
//!
//! ```text
//! poly   := sign? term (sign term)*
//! term   := factor ('*'? factor)*
//! factor := number | variable ('^' digits)?
//! number := digits ('/' digits | '.' digits)?
//! ```
//!
//! Variables are matched longest-first against the ring's names, so with
//! names `x1` and `x10` the text `x10` is one variable and `x1x10` is two.
//!
//! An `.ideal` file is line oriented; `#` starts a comment:
//!
//! ```text
//! field gf:32003          # or q
//! vars x0 x1 x2           # or: vars 3 x
//! order grevlex           # optional: grevlex | lex | grlex
//! ideal                   # one generator per line until the next section
//! x0^2 - x1*x2
//! alternating 5           # upper-triangle entries, row by row, one per line
//! inverse                 # inverse polynomials, same variable names
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};
use crate::ring::{default_names, AlternatingMatrix, Monomial, MonomialOrder, PolyRing, Polynomial, RingDescriptor};

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.pos += 1;
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos + 1,
            msg: msg.into(),
        })
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }
}

/// Parses `text` as a polynomial of `ring`.
pub fn parse_polynomial<F: Field>(text: &str, ring: &PolyRing<F>) -> Result<Polynomial<F>> {
    if let Some(p) = text.find(|c: char| !c.is_ascii()) {
        return Err(Error::Syntax {
            pos: text[..p].chars().count() + 1,
            msg: "non-ASCII character".into(),
        });
    }
    let k = ring.field();
    let mut lx = Lexer { text, pos: 0 };
    let mut terms: Vec<(Monomial, F::Elem)> = Vec::new();
    lx.skip_ws();
    if lx.peek().is_none() {
        return lx.err("empty polynomial");
    }
    let mut first = true;
    loop {
        lx.skip_ws();
        let mut negative = false;
        match lx.peek() {
            None if !first => break,
            Some(b'+') => {
                lx.pos += 1;
            }
            Some(b'-') => {
                negative = true;
                lx.pos += 1;
            }
            _ if first => {}
            _ => return lx.err("expected '+' or '-'"),
        }
        first = false;
        lx.skip_ws();
        let (m, c) = parse_term(&mut lx, ring)?;
        terms.push((m, if negative { k.neg(&c) } else { c }));
        lx.skip_ws();
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(ring.from_terms(terms))
}

fn parse_term<F: Field>(lx: &mut Lexer<'_>, ring: &PolyRing<F>) -> Result<(Monomial, F::Elem)> {
    let k = ring.field();
    let mut coef = k.one();
    let mut mono = Monomial::one();
    let mut factors = 0;
    loop {
        lx.skip_ws();
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = lx.pos;
                lx.take_while(|c| c.is_ascii_digit());
                if matches!(lx.peek(), Some(b'/' | b'.')) {
                    lx.pos += 1;
                    if lx.take_while(|c| c.is_ascii_digit()).is_empty() {
                        return lx.err("malformed number");
                    }
                }
                let lit = &lx.text[start..lx.pos];
                let v = k.parse(lit).map_err(|e| Error::Syntax {
                    pos: start + 1,
                    msg: e.to_string(),
                })?;
                coef = k.mul(&coef, &v);
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = lx.pos;
                let ident = lx.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
                let vars = split_identifier(ident, ring.names()).ok_or_else(|| Error::UnknownVariable {
                    name: ident.to_string(),
                    pos: start + 1,
                })?;
                let mut exp = 1u32;
                if lx.peek() == Some(b'^') {
                    lx.pos += 1;
                    let digits = lx.take_while(|c| c.is_ascii_digit());
                    exp = match digits.parse::<u32>() {
                        Ok(e) if e <= 255 => e,
                        _ => return lx.err("expected exponent (0..=255)"),
                    };
                }
                let last = vars.len() - 1;
                for (i, v) in vars.into_iter().enumerate() {
                    let e = if i == last { exp } else { 1 };
                    let total = mono.exponent(v) + e;
                    if total > 255 {
                        return lx.err("exponent overflow");
                    }
                    mono.set_exponent(v, total);
                }
            }
            _ if factors == 0 => return lx.err("expected a number or a variable"),
            _ => return Ok((mono, coef)),
        }
        factors += 1;
        lx.skip_ws();
        match lx.peek() {
            Some(b'*') => {
                lx.pos += 1;
                lx.skip_ws();
                if !lx.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    return lx.err("expected a factor after '*'");
                }
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {}
            Some(b'+' | b'-') | None => return Ok((mono, coef)),
            Some(_) => return lx.err("unexpected character"),
        }
    }
}

/// Splits an identifier into variable names, longest match first.
fn split_identifier(ident: &str, names: &[String]) -> Option<Vec<usize>> {
    if ident.is_empty() {
        return Some(Vec::new());
    }
    let mut candidates: Vec<(usize, &String)> = names.iter().enumerate().filter(|(_, n)| ident.starts_with(n.as_str())).collect();
    candidates.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));
    for (i, n) in candidates {
        if let Some(mut rest) = split_identifier(&ident[n.len()..], names) {
            rest.insert(0, i);
            return Some(rest);
        }
    }
    None
}

/// One source line of a section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLine {
    pub line: usize,
    pub text: String,
}

/// Parsed `.ideal` file. Polynomials stay textual until a ring is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFile {
    pub field: Option<FieldDescriptor>,
    pub names: Vec<String>,
    pub order: MonomialOrder,
    pub ideal: Vec<SourceLine>,
    pub alternating: Option<(usize, Vec<SourceLine>)>,
    pub inverse: Vec<SourceLine>,
}

#[derive(PartialEq)]
enum Section {
    Header,
    Ideal,
    Alternating,
    Inverse,
}

impl IdealFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut f = IdealFile {
            field: None,
            names: Vec::new(),
            order: MonomialOrder::Grevlex,
            ideal: Vec::new(),
            alternating: None,
            inverse: Vec::new(),
        };
        let mut section = Section::Header;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut words = body.split_whitespace();
            let head = words.next().unwrap();
            let bad = |msg: String| Error::Syntax { pos: 1, msg: format!("line {line}: {msg}") };
            match head {
                "field" => {
                    let spec = words.next().ok_or_else(|| bad("missing field".into()))?;
                    f.field = Some(spec.parse().map_err(|e: crate::field::FieldError| bad(e.to_string()))?);
                }
                "vars" => {
                    let rest: Vec<&str> = words.collect();
                    f.names = match rest.as_slice() {
                        [n] if n.chars().all(|c| c.is_ascii_digit()) => {
                            default_names("x", n.parse().map_err(|_| bad("bad variable count".into()))?)
                        }
                        [n, prefix] if n.chars().all(|c| c.is_ascii_digit()) => {
                            default_names(prefix, n.parse().map_err(|_| bad("bad variable count".into()))?)
                        }
                        names => names.iter().map(|s| s.to_string()).collect(),
                    };
                }
                "order" => {
                    let o = words.next().ok_or_else(|| bad("missing order".into()))?;
                    f.order = o.parse()?;
                }
                "ideal" => section = Section::Ideal,
                "inverse" => section = Section::Inverse,
                "alternating" => {
                    let m: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| bad("expected matrix size".into()))?;
                    f.alternating = Some((m, Vec::new()));
                    section = Section::Alternating;
                }
                _ => {
                    let entry = SourceLine {
                        line,
                        text: body.to_string(),
                    };
                    match section {
                        Section::Header => return Err(bad(format!("unexpected {head:?} before any section"))),
                        Section::Ideal => f.ideal.push(entry),
                        Section::Inverse => f.inverse.push(entry),
                        Section::Alternating => f.alternating.as_mut().unwrap().1.push(entry),
                    }
                }
            }
        }
        if f.names.is_empty() {
            return Err(Error::Syntax {
                pos: 1,
                msg: "missing `vars` line".into(),
            });
        }
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The declared ring over `field`.
    pub fn ring<F: Field>(&self, field: F) -> Result<PolyRing<F>> {
        Ok(PolyRing::with_names(field, self.names.clone())?.with_order(self.order))
    }

    fn parse_lines<F: Field>(lines: &[SourceLine], ring: &PolyRing<F>) -> Result<Vec<Polynomial<F>>> {
        lines
            .iter()
            .map(|l| {
                parse_polynomial(&l.text, ring).map_err(|e| match e {
                    Error::Syntax { pos, msg } => Error::Syntax {
                        pos,
                        msg: format!("line {}: {msg}", l.line),
                    },
                    other => other,
                })
            })
            .collect()
    }

    pub fn generators<F: Field>(&self, ring: &PolyRing<F>) -> Result<Vec<Polynomial<F>>> {
        Self::parse_lines(&self.ideal, ring)
    }

    pub fn inverse_polynomials<F: Field>(&self, ring: &PolyRing<F>) -> Result<Vec<Polynomial<F>>> {
        Self::parse_lines(&self.inverse, ring)
    }

    pub fn matrix<F: Field>(&self, ring: &PolyRing<F>) -> Result<Option<AlternatingMatrix<F>>> {
        match &self.alternating {
            None => Ok(None),
            Some((m, lines)) => {
                let entries = Self::parse_lines(lines, ring)?;
                Ok(Some(AlternatingMatrix::from_upper(ring, *m, entries)?))
            }
        }
    }
}

/// Renders an `.ideal` file for the given ring and generators.
pub fn render_ideal_file<F: Field>(ring: &PolyRing<F>, gens: &[Polynomial<F>]) -> String {
    let mut out = header(ring);
    out.push_str("ideal\n");
    for g in gens {
        let _ = writeln!(out, "{}", ring.format(g));
    }
    out
}

/// Renders an `.ideal` file holding inverse polynomials.
pub fn render_inverse_file<F: Field>(ring: &PolyRing<F>, polys: &[Polynomial<F>]) -> String {
    let mut out = header(ring);
    out.push_str("inverse\n");
    for g in polys {
        let _ = writeln!(out, "{}", ring.format(g));
    }
    out
}

fn header<F: Field>(ring: &PolyRing<F>) -> String {
    format!(
        "field {}\nvars {}\norder {}\n",
        ring.field().descriptor(),
        ring.names().join(" "),
        ring.order()
    )
}

/// Sparse graded Betti numbers: `(i, j) -> β_{i,j}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "BettiTriples", into = "BettiTriples")]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i64), u64>,
}

#[derive(Serialize, Deserialize)]
struct BettiTriples(Vec<(usize, i64, u64)>);

impl From<BettiTriples> for BettiTable {
    fn from(t: BettiTriples) -> Self {
        let mut b = BettiTable::default();
        for (i, j, v) in t.0 {
            b.set(i, j, v);
        }
        b
    }
}

impl From<BettiTable> for BettiTriples {
    fn from(b: BettiTable) -> Self {
        BettiTriples(b.triples())
    }
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from rows as printed: `rows[j - i][i]`.
    pub fn from_rows(rows: &[&[u64]]) -> Self {
        let mut b = BettiTable::default();
        for (r, row) in rows.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                b.set(i, (i + r) as i64, v);
            }
        }
        b
    }

    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: i64, v: u64) {
        if v == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn triples(&self) -> Vec<(usize, i64, u64)> {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v)).collect()
    }

    /// Projective dimension: largest `i` with a nonzero entry.
    pub fn projective_dimension(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Regularity: largest `j - i` with a nonzero entry.
    pub fn regularity(&self) -> i64 {
        self.entries.keys().map(|(i, j)| j - *i as i64).max().unwrap_or(0)
    }

    pub fn total(&self, i: usize) -> u64 {
        self.entries.iter().filter(|(k, _)| k.0 == i).map(|(_, v)| v).sum()
    }

    pub fn totals(&self) -> Vec<u64> {
        (0..=self.projective_dimension()).map(|i| self.total(i)).collect()
    }

    /// Row `r` of the printed grid: `β_{i, i+r}` for `i = 0..=pd`.
    pub fn row(&self, r: i64) -> Vec<u64> {
        (0..=self.projective_dimension()).map(|i| self.get(i, i as i64 + r)).collect()
    }

    /// `sum_i (-1)^i β_{i,j}` for every `j`.
    pub fn alternating_sums(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for (&(i, j), &v) in &self.entries {
            let s = if i % 2 == 0 { v as i64 } else { -(v as i64) };
            *out.entry(j).or_insert(0) += s;
        }
        out
    }
}

/// Grid with columns `i`, rows `j - i`, and `--` for zeros.
pub fn render_betti(t: &BettiTable) -> String {
    if t.entries.is_empty() {
        return "  | 0\n--+--\n0 | 1\n".to_string();
    }
    let pd = t.projective_dimension();
    let rmin = t.entries.keys().map(|(i, j)| j - *i as i64).min().unwrap().min(0);
    let rmax = t.regularity();
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut labels = Vec::new();
    for r in rmin..=rmax {
        labels.push(r.to_string());
        cells.push(
            t.row(r)
                .iter()
                .map(|&v| if v == 0 { "--".to_string() } else { v.to_string() })
                .collect(),
        );
    }
    let lw = labels.iter().map(|l| l.len()).max().unwrap().max(5);
    let widths: Vec<usize> = (0..=pd)
        .map(|i| {
            cells
                .iter()
                .map(|row| row[i].len())
                .chain([i.to_string().len(), t.total(i).to_string().len()])
                .max()
                .unwrap()
        })
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:>lw$} |", "");
    for (i, w) in widths.iter().enumerate() {
        let _ = write!(out, " {:>w$}", i);
    }
    out.push('\n');
    let _ = writeln!(out, "{}-+{}", "-".repeat(lw), "-".repeat(widths.iter().map(|w| w + 1).sum()));
    for (label, row) in labels.iter().zip(&cells) {
        let _ = write!(out, "{:>lw$} |", label);
        for (c, w) in row.iter().zip(&widths) {
            let _ = write!(out, " {:>w$}", c);
        }
        out.push('\n');
    }
    let _ = write!(out, "{:>lw$} |", "total");
    for (i, w) in widths.iter().enumerate() {
        let _ = write!(out, " {:>w$}", t.total(i));
    }
    out.push('\n');
    out
}

/// Reproducibility block echoed into every machine report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub field: FieldDescriptor,
    pub order: MonomialOrder,
    pub seed: Option<u64>,
    pub steps: usize,
    pub slack: usize,
    pub engine_version: String,
}

/// Machine-readable report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MachineReport {
    pub ring: RingDescriptor,
    pub betti: Vec<(usize, i64, u64)>,
    pub h_vector: Option<Vec<i64>>,
    pub regularity: Option<i64>,
    pub pd: Option<usize>,
    pub multiplicity: Option<i64>,
    pub certificates: serde_json::Value,
    pub config: RunConfig,
}

impl MachineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    #[test]
    fn parses_basic_forms() {
        let r = PolyRing::new(Rationals, 4).unwrap();
        let q = parse_polynomial("x0^2 - x1*x3", &r).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(r.format(&q), "x0^2 - x1*x3");
        assert!(parse_polynomial("0", &r).unwrap().is_zero());
        let implicit = parse_polynomial("3/2 x0x1 + 2 x2^2x3 - 1", &r).unwrap();
        let explicit = parse_polynomial("3/2*x0*x1 + 2*x2^2*x3 - 1", &r).unwrap();
        assert_eq!(implicit, explicit);
        assert_eq!(parse_polynomial("x0 - x0", &r).unwrap(), r.zero());
    }

    #[test]
    fn family_polynomial_with_y_names() {
        let r = PolyRing::with_names(Rationals, default_names("y", 6)).unwrap();
        let f = parse_polynomial(
            "y0*y1*y2^2 + y1*y2*y3^2 + y2*y3*y4^2 + y3*y4*y5^2 + y4*y5*y0^2 + y5*y0*y1^2",
            &r,
        )
        .unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.is_homogeneous());
        assert_eq!(f.degree(), Some(4));
    }

    #[test]
    fn longest_match_names() {
        let names: Vec<String> = default_names("x", 11);
        let r = PolyRing::with_names(Rationals, names).unwrap();
        let f = parse_polynomial("x10", &r).unwrap();
        assert_eq!(f.leading_monomial().unwrap().exponent(10), 1);
        let g = parse_polynomial("x1x10", &r).unwrap();
        let m = g.leading_monomial().unwrap();
        assert_eq!((m.exponent(1), m.exponent(10)), (1, 1));
    }

    #[test]
    fn errors_carry_positions() {
        let r = PolyRing::new(Rationals, 2).unwrap();
        assert!(matches!(parse_polynomial("x0 + z", &r), Err(Error::UnknownVariable { pos: 6, .. })));
        assert!(matches!(parse_polynomial("x0 + ", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("x0 ** x1", &r), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_polynomial("x0²", &r), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_polynomial("", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("x0^", &r), Err(Error::Syntax { .. })));
    }

    #[test]
    fn ideal_file_round_trip() {
        let text = "# test\nfield gf:101\nvars 3 x\nideal\nx0^2 - x1*x2\nx1^2 # comment\n";
        let f = IdealFile::parse(text).unwrap();
        assert_eq!(f.field, Some(FieldDescriptor::PrimeField(101)));
        let r = f.ring(PrimeField::new(101).unwrap()).unwrap();
        let gens = f.generators(&r).unwrap();
        assert_eq!(gens.len(), 2);
        let again = IdealFile::parse(&render_ideal_file(&r, &gens)).unwrap();
        assert_eq!(again.generators(&r).unwrap(), gens);
        assert!(IdealFile::parse("ideal\nx0\n").is_err());
    }

    #[test]
    fn alternating_section() {
        let text = "field q\nvars a b c\nalternating 3\na\nb\nc\n";
        let f = IdealFile::parse(text).unwrap();
        let r = f.ring(Rationals).unwrap();
        let m = f.matrix(&r).unwrap().unwrap();
        assert_eq!(m.size(), 3);
        assert_eq!(r.format(m.entry(2, 1)), "-c");
    }

    #[test]
    fn betti_rendering() {
        let t = BettiTable::from_rows(&[
            &[1, 0, 0, 0, 0, 0, 0, 0],
            &[0, 14, 21, 0, 0, 0, 0, 0],
            &[0, 0, 36, 126, 126, 36, 0, 0],
            &[0, 0, 0, 0, 0, 21, 14, 0],
            &[0, 0, 0, 0, 0, 0, 0, 1],
        ]);
        let s = render_betti(&t);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 2 + 5 + 1);
        let row2: Vec<&str> = lines[4].split('|').nth(1).unwrap().split_whitespace().collect();
        assert_eq!(row2, ["--", "--", "36", "126", "126", "36", "--", "--"]);
        assert_eq!(t.regularity(), 4);
        assert_eq!(t.projective_dimension(), 7);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<BettiTable>(&json).unwrap(), t);

        let koszul = BettiTable::from_rows(&[&[1, 3, 3, 1]]);
        let s = render_betti(&koszul);
        assert!(s.lines().nth(2).unwrap().ends_with("1 3 3 1"));
        assert!(render_betti(&BettiTable::new()).contains("0 | 1"));
    }

    fn gf_poly() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        proptest::collection::vec((proptest::collection::vec(0u32..4, 3), -50i64..50), 0..6)
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(terms in gf_poly(), num in -20i64..20, den in 1i64..9) {
            let r = PolyRing::new(PrimeField::new(101).unwrap(), 3).unwrap();
            let f = r.from_terms(terms.iter().map(|(e, c)| (Monomial::from_exponents(e), r.field().from_i64(*c))).collect());
            prop_assert_eq!(parse_polynomial(&r.format(&f), &r).unwrap(), f);

            let q = PolyRing::new(Rationals, 3).unwrap();
            let c = num_rational::BigRational::new(num.into(), den.into());
            let g = q.from_terms(terms.iter().map(|(e, k)| (Monomial::from_exponents(e), q.field().mul(&c, &q.field().from_i64(*k)))).collect());
            prop_assert_eq!(parse_polynomial(&q.format(&g), &q).unwrap(), g);
        }
    }
}
