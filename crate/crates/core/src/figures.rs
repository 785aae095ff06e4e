//! Parameter sweeps behind the published figures, emitted as delimited text.

use std::fmt::Write as _;
use std::io;

use crate::cosmology::{Parameters, Variable};
use crate::entanglement::Quantity;
use crate::error::{Error, Result};

pub const DEFAULT_CURVES: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const DEFAULT_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl Spacing {
    pub fn name(self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig3e,
    Fig3f,
    Fig4a,
    Fig4b,
}

impl Figure {
    pub const ALL: [Figure; 12] = [
        Figure::Fig1a,
        Figure::Fig1b,
        Figure::Fig2a,
        Figure::Fig2b,
        Figure::Fig3a,
        Figure::Fig3b,
        Figure::Fig3c,
        Figure::Fig3d,
        Figure::Fig3e,
        Figure::Fig3f,
        Figure::Fig4a,
        Figure::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig3c => "fig3c",
            Figure::Fig3d => "fig3d",
            Figure::Fig3e => "fig3e",
            Figure::Fig3f => "fig3f",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name.to_ascii_lowercase())
    }

    pub fn quantity(self) -> Quantity {
        use Figure::*;
        match self {
            Fig1a | Fig1b => Quantity::EAb,
            Fig2a | Fig2b => Quantity::EAAbar,
            Fig3a | Fig3b | Fig3c => Quantity::EARest,
            Fig3d | Fig3e | Fig3f => Quantity::EAbarRest,
            Fig4a | Fig4b => Quantity::Residual,
        }
    }

    /// Swept variable with its default range.
    pub fn abscissa(self) -> (Variable, f64, f64, Spacing) {
        use Figure::*;
        match self {
            Fig1a | Fig2a | Fig4a | Fig3a | Fig3d => (Variable::SigmaRate, 0.1, 10.0, Spacing::Log),
            Fig1b | Fig2b | Fig4b | Fig3c | Fig3f => (Variable::Mass, 1e-3, 1e3, Spacing::Log),
            Fig3b | Fig3e => (Variable::Epsilon, 0.01, 10.0, Spacing::Log),
        }
    }

    /// Variable labelling the separate curves; `None` for single-curve panels.
    pub fn curve_variable(self) -> Option<Variable> {
        use Figure::*;
        match self {
            Fig1a | Fig2a | Fig4a | Fig3b | Fig3e => Some(Variable::K),
            Fig1b | Fig2b | Fig4b => Some(Variable::Epsilon),
            Fig3a | Fig3d => Some(Variable::S),
            Fig3c | Fig3f => None,
        }
    }

    /// Default sweep: all fixed parameters equal to 1.
    pub fn sweep(self) -> SweepConfig {
        let (variable, min, max, spacing) = self.abscissa();
        SweepConfig {
            variable,
            min,
            max,
            count: DEFAULT_POINTS,
            spacing,
            fixed: Parameters::UNIT,
            curves: self.curve_variable().map(|v| (v, DEFAULT_CURVES.to_vec())),
            quantity: self.quantity(),
            label: Some(self.name().to_string()),
        }
    }
}

impl std::fmt::Display for Figure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub variable: Variable,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
    /// Values for every variable that is neither swept nor labelling a curve.
    pub fixed: Parameters,
    pub curves: Option<(Variable, Vec<f64>)>,
    pub quantity: Quantity,
    /// Figure name recorded in the provenance line.
    pub label: Option<String>,
}

fn check_value(var: Variable, x: f64) -> Result<()> {
    let ok = x.is_finite() && (x > 0.0 || (x == 0.0 && var.allows_zero()));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: var.name(),
            value: x,
            reason: "out of range for this parameter",
        })
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidProblem(format!("sweep needs at least 2 points, got {}", self.count)));
        }
        if !(self.min < self.max) {
            return Err(Error::InvalidProblem(format!(
                "sweep range must satisfy min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        check_value(self.variable, self.min)?;
        check_value(self.variable, self.max)?;
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::InvalidProblem("log spacing needs a positive range".into()));
        }
        if let Some((var, values)) = &self.curves {
            if *var == self.variable {
                return Err(Error::InvalidProblem(format!("{var} cannot be both swept and a curve label")));
            }
            if values.is_empty() {
                return Err(Error::InvalidProblem("empty curve set".into()));
            }
            for &v in values {
                check_value(*var, v)?;
            }
        }
        Ok(())
    }

    /// Abscissa values; the endpoints are exactly `min` and `max`.
    pub fn abscissa(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == last {
                    return self.max;
                }
                let t = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }

    fn provenance(&self) -> String {
        let mut line = format!("# gaussent {}", env!("CARGO_PKG_VERSION"));
        if let Some(label) = &self.label {
            let _ = write!(line, " figure={label}");
        }
        let _ = write!(
            line,
            " quantity={} x={} range=[{:?},{:?}] points={} spacing={}",
            self.quantity,
            self.variable,
            self.min,
            self.max,
            self.count,
            self.spacing.name()
        );
        if let Some((var, values)) = &self.curves {
            let list: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
            let _ = write!(line, " curves={}:{{{}}}", var, list.join(","));
        }
        let curve_var = self.curves.as_ref().map(|(v, _)| *v);
        let fixed: Vec<String> = Variable::ALL
            .iter()
            .filter(|v| **v != self.variable && Some(**v) != curve_var)
            .map(|v| format!("{}={:?}", v, v.get(&self.fixed)))
            .collect();
        let _ = write!(line, " fixed: {}", fixed.join(" "));
        line
    }

    pub fn run(&self) -> Result<Table> {
        self.validate()?;
        let xs = self.abscissa();
        let curves: Vec<Option<f64>> = match &self.curves {
            Some((_, values)) => values.iter().map(|v| Some(*v)).collect(),
            None => vec![None],
        };
        let mut header = vec![self.variable.name().to_string()];
        for c in &curves {
            header.push(match (c, &self.curves) {
                (Some(v), Some((var, _))) => format!("{}[{}={:?}]", self.quantity, var, v),
                _ => self.quantity.name().to_string(),
            });
        }
        let mut rows = Vec::with_capacity(xs.len());
        for &x in &xs {
            let mut row = Vec::with_capacity(curves.len() + 1);
            row.push(x);
            for c in &curves {
                let mut p = self.fixed;
                self.variable.set(&mut p, x);
                if let (Some(v), Some((var, _))) = (c, &self.curves) {
                    var.set(&mut p, *v);
                }
                row.push(self.quantity.evaluate(&p)?);
            }
            rows.push(row);
        }
        Ok(Table {
            provenance: self.provenance(),
            header,
            rows,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Comma,
    Tab,
}

impl Delimiter {
    fn as_char(self) -> char {
        match self {
            Delimiter::Comma => ',',
            Delimiter::Tab => '\t',
        }
    }
}

/// Sweep output: one row per abscissa value, first column the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub provenance: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// Column `j` (0 is the abscissa).
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn n_curves(&self) -> usize {
        self.header.len() - 1
    }

    /// Floats use the shortest representation that round-trips.
    pub fn write_to<W: io::Write>(&self, out: &mut W, delim: Delimiter) -> io::Result<()> {
        let d = delim.as_char().to_string();
        writeln!(out, "{}", self.provenance)?;
        writeln!(out, "{}", self.header.join(&d))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            writeln!(out, "{}", cells.join(&d))?;
        }
        Ok(())
    }

    pub fn to_string_with(&self, delim: Delimiter) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf, delim).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

pub fn figure(fig: Figure) -> Result<Table> {
    fig.sweep().run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for f in Figure::ALL {
            assert_eq!(Figure::parse(f.name()), Some(f));
        }
        assert_eq!(Figure::parse("FIG2B"), Some(Figure::Fig2b));
        assert!(Figure::parse("fig5").is_none());
    }

    #[test]
    fn endpoints_are_exact() {
        let cfg = Figure::Fig1b.sweep();
        let xs = cfg.abscissa();
        assert_eq!(xs[0], 1e-3);
        assert_eq!(*xs.last().unwrap(), 1e3);
        assert!((xs[50] - 1.0).abs() < 1e-12);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn layout_and_provenance() {
        let t = figure(Figure::Fig1a).unwrap();
        assert_eq!(t.header[0], "sigma_rate");
        assert_eq!(t.header[1], "e_ab[k=0.5]");
        assert_eq!(t.n_curves(), 4);
        assert_eq!(t.rows.len(), DEFAULT_POINTS);
        assert!(t.provenance.starts_with("# gaussent "));
        assert!(t.provenance.contains("curves=k:{0.5,1.0,2.0,4.0}"));
        assert!(t.provenance.contains("m=1.0 epsilon=1.0 s=1.0"));
        let single = figure(Figure::Fig3c).unwrap();
        assert_eq!(single.header, vec!["m", "e_a_rest"]);
    }

    #[test]
    fn output_is_bit_stable() {
        let a = figure(Figure::Fig4b).unwrap().to_string_with(Delimiter::Comma);
        let b = figure(Figure::Fig4b).unwrap().to_string_with(Delimiter::Comma);
        assert_eq!(a, b);
        assert!(!a.contains('\r'));
        let tsv = figure(Figure::Fig4b).unwrap().to_string_with(Delimiter::Tab);
        assert_eq!(tsv.lines().nth(1).unwrap(), "m\tresidual[epsilon=0.5]\tresidual[epsilon=1.0]\tresidual[epsilon=2.0]\tresidual[epsilon=4.0]");
        // values survive a text round trip
        for line in a.lines().skip(2) {
            for cell in line.split(',') {
                let v: f64 = cell.parse().unwrap();
                assert_eq!(format!("{v:?}"), cell);
            }
        }
    }

    #[test]
    fn sweep_validation() {
        let mut cfg = Figure::Fig1a.sweep();
        cfg.count = 1;
        assert!(cfg.run().is_err());
        let mut cfg = Figure::Fig1a.sweep();
        cfg.min = 10.0;
        assert!(cfg.run().is_err());
        let mut cfg = Figure::Fig1a.sweep();
        cfg.curves = Some((Variable::K, vec![0.0]));
        assert!(cfg.run().is_err());
        let mut cfg = Figure::Fig1a.sweep();
        cfg.curves = Some((Variable::SigmaRate, vec![1.0]));
        assert!(cfg.run().is_err());
    }
}
