//! Serializable report types and renderers. Machine formats are
//! deterministic: field order is fixed, collections are pre-sorted and no
//! timestamps are embedded, so identical invocations are byte-identical.

use std::io::IsTerminal;

use serde::{Deserialize, Serialize};

use fusion_rings::{AdmissibleClass, AffineSymbol, FormalSum, FusionTable, Parity};

pub const TABLE_FORMAT_VERSION: u32 = 1;

/// A symbol as explicit integer fields, never a re-encoded string.
#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymbolJson {
    pub r: u32,
    pub parity: u32,
    pub s: u32,
}

impl From<AffineSymbol> for SymbolJson {
    fn from(x: AffineSymbol) -> Self {
        SymbolJson { r: x.r, parity: x.parity.as_u32(), s: x.s }
    }
}

impl SymbolJson {
    pub fn to_symbol(self) -> AffineSymbol {
        AffineSymbol::new(self.r, Parity::from_u32(self.parity), self.s)
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
pub struct TermJson {
    pub r: u32,
    pub parity: u32,
    pub s: u32,
    pub coeff: i64,
}

/// Result of a fuse or oracle invocation.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct ProductReport {
    pub level: String,
    pub inputs: Vec<SymbolJson>,
    pub product: Vec<TermJson>,
    pub version: String,
}

impl ProductReport {
    pub fn new(level: String, inputs: Vec<AffineSymbol>, product: &FormalSum<AffineSymbol>) -> Self {
        ProductReport {
            level,
            inputs: inputs.into_iter().map(Into::into).collect(),
            product: product
                .iter()
                .map(|(sym, coeff)| TermJson {
                    r: sym.r,
                    parity: sym.parity.as_u32(),
                    s: sym.s,
                    coeff: i64::try_from(coeff.clone()).expect("small coefficient"),
                })
                .collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn render_text(&self) -> String {
        let inputs: Vec<String> = self
            .inputs
            .iter()
            .map(|s| s.to_symbol().to_string())
            .collect();
        let terms: Vec<String> = self
            .product
            .iter()
            .map(|t| {
                let sym = AffineSymbol::new(t.r, Parity::from_u32(t.parity), t.s);
                if t.coeff == 1 {
                    sym.to_string()
                } else {
                    format!("{}*{}", t.coeff, sym)
                }
            })
            .collect();
        let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        format!("[{}] {} = {}", self.level, inputs.join(" o "), rhs)
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("r,parity,s,coeff\n");
        for t in &self.product {
            out.push_str(&format!("{},{},{},{}\n", t.r, t.parity, t.s, t.coeff));
        }
        out
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
pub struct ClassJson {
    pub r: u32,
    pub s: u32,
}

/// Structure-constant table: classes first, then the flattened tensor in
/// row-major `(i, j, k)` order. Doubles as the on-disk cache format.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct TableFile {
    pub format_version: u32,
    pub level: String,
    pub classes: Vec<ClassJson>,
    pub tensor: Vec<u64>,
}

impl TableFile {
    pub fn from_table(table: &FusionTable) -> Self {
        TableFile {
            format_version: TABLE_FORMAT_VERSION,
            level: table.level().to_string(),
            classes: table
                .classes()
                .iter()
                .map(|c: &AdmissibleClass| ClassJson { r: c.rep().r, s: c.rep().s })
                .collect(),
            tensor: table.cells().to_vec(),
        }
    }

    pub fn render_text(&self) -> String {
        let n = self.classes.len();
        let mut out = format!("level {}: {} classes\n", self.level, n);
        for (idx, c) in self.classes.iter().enumerate() {
            out.push_str(&format!("  [{idx}] ({},0;{})\n", c.r, c.s));
        }
        out.push_str("nonzero structure constants N[i][j][k]:\n");
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.tensor[(i * n + j) * n + k];
                    if v != 0 {
                        out.push_str(&format!("  N[{i}][{j}][{k}] = {v}\n"));
                    }
                }
            }
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let n = self.classes.len();
        let mut out = String::from("i,j,k,N\n");
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.push_str(&format!(
                        "{i},{j},{k},{}\n",
                        self.tensor[(i * n + j) * n + k]
                    ));
                }
            }
        }
        out
    }
}

/// Outcome of a verification suite.
#[derive(Serialize, Deserialize, Clone, PartialEq, Eq, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub level: String,
    pub bound: Option<u32>,
    pub pass: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
    pub version: String,
}

impl VerifyReport {
    pub fn render_text(&self) -> String {
        let verdict = if self.pass { paint("PASS", "32") } else { paint("FAIL", "31") };
        let bound = self.bound.map_or(String::new(), |b| format!(" bound={b}"));
        let mut line = format!(
            "{verdict} suite={} level={}{} checked={}",
            self.suite, self.level, bound, self.checked
        );
        if let Some(ce) = &self.counterexample {
            line.push_str(&format!("\n  counterexample: {ce}"));
        }
        line
    }
}

/// ANSI styling, disabled when FUSION_RINGS_NO_COLOR is set or stdout is not
/// a terminal.
pub fn paint(text: &str, code: &str) -> String {
    let no_color = std::env::var_os("FUSION_RINGS_NO_COLOR").is_some();
    if no_color || !std::io::stdout().is_terminal() {
        text.to_string()
    } else {
        format!("\x1b[{code}m{text}\x1b[0m")
    }
}

/// Split a comma-separated list of parenthesized symbols, e.g.
/// `"(1,0;0),(0,0;1)"`, respecting the commas inside each group.
pub fn split_symbol_list(input: &str) -> Result<Vec<String>, String> {
    let mut groups = Vec::new();
    let mut current = String::new();
    let mut depth = 0u32;
    for c in input.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                if depth == 0 {
                    return Err(format!("unbalanced ')' in {input:?}"));
                }
                depth -= 1;
                current.push(c);
                if depth == 0 {
                    groups.push(current.trim().to_string());
                    current = String::new();
                }
            }
            ',' | ' ' | '\t' if depth == 0 => {}
            _ if depth > 0 => current.push(c),
            _ => return Err(format!("unexpected {c:?} outside a symbol in {input:?}")),
        }
    }
    if depth != 0 {
        return Err(format!("unbalanced '(' in {input:?}"));
    }
    Ok(groups)
}
