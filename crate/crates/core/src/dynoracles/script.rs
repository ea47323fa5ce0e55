//! Line-oriented operation scripts, e.g.
//!
//! ```text
//! on 3
//! off 2
//! ins 0 4
//! del 0 1
//! q 0 5
//! ```
//!
//! Each line is a keyword followed by integer arguments. `#` starts a comment.
//! Which keywords an oracle accepts is decided by the replay driver.

use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Op {
    pub line: usize,
    pub name: String,
    pub args: Vec<i64>,
}

impl Op {
    /// Argument `k` as an index.
    pub fn index(&self, k: usize) -> Result<usize> {
        let raw = *self
            .args
            .get(k)
            .ok_or_else(|| Error::parse(self.line, format!("`{}` needs argument {}", self.name, k + 1)))?;
        usize::try_from(raw).map_err(|_| Error::parse(self.line, format!("negative index {raw}")))
    }

    pub fn int(&self, k: usize) -> Result<i64> {
        self.args
            .get(k)
            .copied()
            .ok_or_else(|| Error::parse(self.line, format!("`{}` needs argument {}", self.name, k + 1)))
    }

    pub fn expect_args(&self, count: usize) -> Result<()> {
        if self.args.len() != count {
            return Err(Error::parse(
                self.line,
                format!("`{}` takes {count} arguments, got {}", self.name, self.args.len()),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

pub fn parse_script(text: &str) -> Result<Vec<Op>> {
    let mut ops = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let name = tokens.next().unwrap_or_default().to_string();
        let args = tokens
            .map(|t| t.parse::<i64>().map_err(|_| Error::parse(k + 1, format!("bad argument `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        ops.push(Op { line: k + 1, name, args });
    }
    Ok(ops)
}
