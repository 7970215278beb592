//! Plain-text replay files for failing trials. Floats are written as C99 hex
//! literals (`0x1.8p+1`) so every input round-trips bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::means::{MeanSpec, OpMonotone};
use crate::numkernel::{c64, CMatrix};
use crate::pulm::{MapKind, PULMap};

use super::bundle::{Bundle, Cell};
use super::registry::CheckKind;

const MAGIC: &str = "sectorlab-witness 1";

pub fn hex_f64(x: f64) -> String {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if !x.is_finite() {
        return format!("{x}");
    }
    if exp == 0 && mant == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let frac = format!("{mant:013x}");
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}0x{lead}p{e:+}")
    } else {
        format!("{sign}0x{lead}.{frac}p{e:+}")
    }
}

/// Parses the canonical form written by [`hex_f64`].
pub fn parse_hex_f64(s: &str) -> Option<f64> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let body = body.strip_prefix("0x")?;
    let (mantissa, exp) = body.split_once('p')?;
    let e: i64 = exp.parse().ok()?;
    let (lead, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.len() > 13 || !frac.chars().all(|c| c.is_ascii_hexdigit()) {
        return None;
    }
    let mant = if frac.is_empty() { 0 } else { u64::from_str_radix(&format!("{frac:0<13}"), 16).ok()? };
    let bits = match lead {
        "1" if (-1022..=1023).contains(&e) => (((e + 1023) as u64) << 52) | mant,
        "0" if mant == 0 && e == 0 => 0,
        "0" if e == -1022 => mant,
        _ => return None,
    };
    Some(f64::from_bits(bits | if neg { 1 << 63 } else { 0 }))
}

/// A failing trial with everything needed to re-evaluate it.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub check: CheckKind,
    pub part: String,
    pub seed: u64,
    pub trial: usize,
    pub cell: Cell,
    pub note: String,
    pub bundle: Option<Bundle>,
}

fn write_matrix(out: &mut String, name: &str, x: &CMatrix) {
    let _ = writeln!(out, "matrix {name} {} {}", x.nrows(), x.ncols());
    for i in 0..x.nrows() {
        let row: Vec<String> = (0..x.ncols())
            .map(|j| format!("{} {}", hex_f64(x[(i, j)].re), hex_f64(x[(i, j)].im)))
            .collect();
        let _ = writeln!(out, "{}", row.join("  "));
    }
}

fn write_phi(out: &mut String, phi: &PULMap) {
    match phi.kind() {
        MapKind::Identity => {
            let _ = writeln!(out, "phi identity {}", phi.in_dim());
        }
        MapKind::NormalizedTrace => {
            let _ = writeln!(out, "phi trace {} {}", phi.in_dim(), phi.out_dim());
        }
        MapKind::Pinching { blocks } => {
            let b: Vec<String> = blocks.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "phi pinch {}", b.join("+"));
        }
        MapKind::UnitaryConj { u } => {
            let _ = writeln!(out, "phi unitary");
            write_matrix(out, "u", u);
        }
        MapKind::Compression { v } => {
            let _ = writeln!(out, "phi compress");
            write_matrix(out, "v", v);
        }
        MapKind::SchurHadamard { c } => {
            let _ = writeln!(out, "phi schur");
            write_matrix(out, "c", c);
        }
        MapKind::ConvexCombo { parts } => {
            let _ = writeln!(out, "phi convex {}", parts.len());
            for (w, p) in parts {
                let _ = writeln!(out, "weight {}", hex_f64(*w));
                write_phi(out, p);
            }
        }
    }
}

impl Witness {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "check {}", self.check);
        let _ = writeln!(out, "part {}", self.part);
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "trial {}", self.trial);
        let c = &self.cell;
        let _ = writeln!(out, "cell {} {} {} {}", c.n, hex_f64(c.theta), hex_f64(c.m), hex_f64(c.big_m));
        // keep the note on one line
        let _ = writeln!(out, "note {}", self.note.replace('\n', " "));
        if let Some(b) = &self.bundle {
            let _ = writeln!(out, "p {}", hex_f64(b.p));
            let _ = writeln!(out, "v {}", hex_f64(b.v));
            let _ = writeln!(out, "sigma1 {}", b.sigma1.f);
            let _ = writeln!(out, "sigma2 {}", b.sigma2.f);
            let _ = writeln!(out, "f {}", b.f);
            write_phi(&mut out, &b.phi);
            write_matrix(&mut out, "a", &b.a);
            write_matrix(&mut out, "b", &b.b);
            if let (Some(ia), Some(ib)) = (&b.inv_a, &b.inv_b) {
                write_matrix(&mut out, "inv_a", ia);
                write_matrix(&mut out, "inv_b", ib);
            }
        }
        let _ = writeln!(out, "end");
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Witness> {
        Witness::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Witness> {
        let mut r = Reader { lines: text.lines().enumerate().peekable() };
        let (line, first) = r.next_line()?;
        if first.trim() != MAGIC {
            return Err(parse_err(line, 1, format!("expected '{MAGIC}'")));
        }
        let check: CheckKind = r.field("check")?.parse()?;
        let part = r.field("part")?;
        let seed = r.parsed("seed")?;
        let trial = r.parsed("trial")?;
        let (line, cell_text) = r.keyed("cell")?;
        let toks: Vec<&str> = cell_text.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(parse_err(line, 1, "cell needs n, theta, m, M"));
        }
        let cell = Cell {
            n: toks[0].parse().map_err(|_| parse_err(line, 6, "bad dimension"))?,
            theta: hex(toks[1], line)?,
            m: hex(toks[2], line)?,
            big_m: hex(toks[3], line)?,
        };
        let note = r.field("note")?;
        let bundle = if r.peek_key() == Some("p") {
            let p = r.hex_field("p")?;
            let v = r.hex_field("v")?;
            let sigma1: OpMonotone = r.field("sigma1")?.parse()?;
            let sigma2: OpMonotone = r.field("sigma2")?.parse()?;
            let f: OpMonotone = r.field("f")?.parse()?;
            let phi = r.phi()?;
            let a = r.matrix("a")?;
            let b = r.matrix("b")?;
            let (inv_a, inv_b) = if r.peek_key() == Some("matrix") {
                (Some(r.matrix("inv_a")?), Some(r.matrix("inv_b")?))
            } else {
                (None, None)
            };
            Some(Bundle {
                cell,
                a,
                b,
                inv_a,
                inv_b,
                v,
                sigma1: MeanSpec::new(sigma1),
                sigma2: MeanSpec::new(sigma2),
                f,
                phi,
                p,
            })
        } else {
            None
        };
        let (line, end) = r.next_line()?;
        if end.trim() != "end" {
            return Err(parse_err(line, 1, "expected 'end'"));
        }
        Ok(Witness { check, part, seed, trial, cell, note, bundle })
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn hex(s: &str, line: usize) -> Result<f64> {
    parse_hex_f64(s).ok_or_else(|| parse_err(line, 1, format!("bad hex float '{s}'")))
}

struct Reader<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Reader<'a> {
    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        self.lines
            .next()
            .map(|(i, l)| (i + 1, l))
            .ok_or_else(|| parse_err(0, 0, "unexpected end of witness"))
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.lines.peek().and_then(|(_, l)| l.split_whitespace().next())
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (line, text) = self.next_line()?;
        match text.split_once(' ') {
            Some((k, rest)) if k == key => Ok((line, rest.trim())),
            _ if text.trim() == key => Ok((line, "")),
            _ => Err(parse_err(line, 1, format!("expected '{key}'"))),
        }
    }

    fn field(&mut self, key: &str) -> Result<String> {
        Ok(self.keyed(key)?.1.to_string())
    }

    fn hex_field(&mut self, key: &str) -> Result<f64> {
        let (line, text) = self.keyed(key)?;
        hex(text, line)
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, text) = self.keyed(key)?;
        text.parse().map_err(|_| parse_err(line, key.len() + 2, format!("bad {key}")))
    }

    fn matrix(&mut self, name: &str) -> Result<CMatrix> {
        let (line, head) = self.keyed("matrix")?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != name {
            return Err(parse_err(line, 8, format!("expected 'matrix {name} rows cols'")));
        }
        let rows: usize = toks[1].parse().map_err(|_| parse_err(line, 8, "bad row count"))?;
        let cols: usize = toks[2].parse().map_err(|_| parse_err(line, 8, "bad column count"))?;
        let mut x = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            let (line, text) = self.next_line()?;
            let toks: Vec<&str> = text.split_whitespace().collect();
            if toks.len() != 2 * cols {
                return Err(parse_err(line, 1, format!("expected {} numbers", 2 * cols)));
            }
            for j in 0..cols {
                x[(i, j)] = c64(hex(toks[2 * j], line)?, hex(toks[2 * j + 1], line)?);
            }
        }
        Ok(x)
    }

    fn phi(&mut self) -> Result<PULMap> {
        let (line, head) = self.keyed("phi")?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        let count = |i: usize| -> Result<usize> {
            toks.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| parse_err(line, 5, "bad map dimension"))
        };
        match toks.first().copied() {
            Some("identity") => Ok(PULMap::identity(count(1)?)),
            Some("trace") => Ok(PULMap::normalized_trace(count(1)?, count(2)?)),
            Some("pinch") => {
                let blocks = toks
                    .get(1)
                    .ok_or_else(|| parse_err(line, 11, "missing blocks"))?
                    .split('+')
                    .map(|b| b.parse().map_err(|_| parse_err(line, 11, "bad block")))
                    .collect::<Result<Vec<usize>>>()?;
                PULMap::pinching(blocks)
            }
            Some("unitary") => PULMap::unitary_conj(self.matrix("u")?),
            Some("compress") => PULMap::compression(self.matrix("v")?),
            Some("schur") => PULMap::schur_hadamard(self.matrix("c")?),
            Some("convex") => {
                let mut parts = Vec::new();
                for _ in 0..count(1)? {
                    let (line, w) = self.keyed("weight")?;
                    let w = hex(w, line)?;
                    parts.push((w, self.phi()?));
                }
                PULMap::convex_combo(parts)
            }
            _ => Err(parse_err(line, 5, format!("unknown map '{head}'"))),
        }
    }
}
