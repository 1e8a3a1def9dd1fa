//! CSV/JSON formatting. Numbers use the shortest round-trip representation,
//! so identical inputs give byte-identical files.

use std::fmt::Write;

use sha2::{Digest, Sha256};

use crate::config::UnitsSpec;

pub const GENERATOR: &str = concat!("wavepacket-cli ", env!("CARGO_PKG_VERSION"));

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Output rescaling from natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale {
    pub gamma: f64,
    pub t0: f64,
}

impl Scale {
    pub fn from_units(units: Option<UnitsSpec>) -> Self {
        units.map_or(
            Self {
                gamma: 1.0,
                t0: 0.0,
            },
            |u| Self {
                gamma: u.gamma,
                t0: u.t0,
            },
        )
    }

    pub fn time(&self, t: f64) -> f64 {
        if self.is_natural() {
            t
        } else {
            self.t0 + t / self.gamma
        }
    }

    pub fn duration(&self, dt: f64) -> f64 {
        dt / self.gamma
    }

    pub fn frequency(&self, w: f64) -> f64 {
        w * self.gamma
    }

    pub fn is_natural(&self) -> bool {
        self.gamma == 1.0 && self.t0 == 0.0
    }

    pub fn describe(&self) -> String {
        if self.is_natural() {
            "natural (gamma = 1, t0 = 0)".into()
        } else {
            format!(
                "gamma = {}, t0 = {} (t -> t0 + t/gamma, delta -> gamma*delta)",
                self.gamma, self.t0
            )
        }
    }
}

/// CSV with `#` metadata lines, a header row and `\n`-terminated records.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(config_hash: &str, scenario: &str, scale: &Scale, columns: &[&str]) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, "# generator: {GENERATOR}");
        let _ = writeln!(buf, "# config-sha256: {config_hash}");
        let _ = writeln!(buf, "# scenario: {scenario}");
        let _ = writeln!(buf, "# units: {}", scale.describe());
        buf.push_str(&columns.join(","));
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            push_number(&mut self.buf, *v);
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes.
fn push_number(buf: &mut String, v: f64) {
    let a = v.abs();
    let _ = if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        write!(buf, "{v}")
    } else {
        write!(buf, "{v:e}")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new("abc", "s", &Scale::from_units(None), &["t", "x"]);
        csv.row(&[0.5, -1.25e-20]);
        csv.row(&[0.0, 3e20]);
        let text = csv.finish();
        assert!(text.ends_with("t,x\n0.5,-1.25e-20\n0,3e20\n"), "{text}");
        assert_eq!(text.lines().filter(|l| l.starts_with('#')).count(), 4);
    }

    #[test]
    fn hash_is_hex() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
