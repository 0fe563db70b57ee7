//! Row types shared by the JSON, CSV and plain writers.

use std::io::{self, Write};

use serde::Serialize;
use thetanorm::gauss::ExpansionSweep;
use thetanorm::{CertificationReport, EvalReport, MeasurementRoute, Range, ScaledReal, ThetaKind};

/// One evaluation. `log_mag` is always present; `value` is empty when the
/// plain double would under- or overflow.
#[derive(Debug, Clone, Serialize)]
pub struct EvalRow {
    pub kind: u8,
    pub v: f64,
    pub t: f64,
    pub sign: i8,
    pub log_mag: f64,
    pub value: Option<f64>,
    pub method: &'static str,
    pub terms: usize,
    pub tail_bound_log: f64,
}

impl EvalRow {
    pub fn new(kind: ThetaKind, v: f64, t: f64, r: &EvalReport) -> Self {
        let plain = r.value.to_plain();
        EvalRow {
            kind: kind.index(),
            v,
            t,
            sign: r.value.sign(),
            log_mag: r.value.log_mag(),
            value: (plain.range == Range::Normal).then_some(plain.value),
            method: r.method.as_str(),
            terms: r.terms_used,
            tail_bound_log: r.tail_bound.log_mag(),
        }
    }

    pub fn write_plain(&self, out: &mut impl Write) -> io::Result<()> {
        let value = match self.value {
            Some(x) => x.to_string(),
            None => format!("{}e^{}", if self.sign < 0 { "-" } else { "" }, self.log_mag),
        };
        writeln!(
            out,
            "theta{}({} | {}i) = {}",
            self.kind, self.v, self.t, value
        )?;
        writeln!(out, "sign {}", self.sign)?;
        writeln!(out, "log_mag {}", self.log_mag)?;
        writeln!(out, "method {}", self.method)?;
        writeln!(out, "terms {}", self.terms)?;
        writeln!(out, "tail_bound_log {}", self.tail_bound_log)
    }
}

fn ln(x: &ScaledReal) -> f64 {
    x.log_mag()
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyRow {
    pub t: f64,
    pub sup_measured_log: f64,
    pub bound_log: f64,
    /// `bound_log - sup_measured_log`; positive when the bound holds.
    pub margin: f64,
    pub pass: bool,
    pub route: MeasurementRoute,
    pub expansion_sup_log: f64,
    pub expansion_bound_log: f64,
    pub expansion_pass: bool,
}

impl CertifyRow {
    pub fn new(t: f64, report: &CertificationReport, i: usize, sweep: &ExpansionSweep) -> Self {
        let sup = report.sup_measured[i];
        let bound = report.bounds[i];
        CertifyRow {
            t,
            sup_measured_log: ln(&sup),
            bound_log: ln(&bound),
            margin: ln(&bound) - ln(&sup),
            pass: sup <= bound,
            route: report.routes[i],
            expansion_sup_log: ln(&sweep.sup_measured),
            expansion_bound_log: ln(&sweep.bound),
            expansion_pass: sweep.all_satisfied,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyOutput {
    pub kind: ThetaKind,
    #[serde(rename = "C")]
    pub c: f64,
    pub eps: f64,
    pub a: f64,
    pub x_count: usize,
    pub rows: Vec<CertifyRow>,
    pub all_pass: bool,
    pub decay_slope: Option<f64>,
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |s| s.to_string())
}

impl CertifyOutput {
    pub fn write_plain(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(
            out,
            "certify theta{} C={} eps={} a={} x_count={}",
            self.kind.index(),
            self.c,
            self.eps,
            self.a,
            self.x_count
        )?;
        writeln!(
            out,
            "{:>10} {:>14} {:>14} {:>12} {:>5} {:>9} {:>14} {:>14} {:>5}",
            "t",
            "ln_sup",
            "ln_bound",
            "margin",
            "pass",
            "route",
            "ln_exp_sup",
            "ln_exp_bound",
            "pass"
        )?;
        for r in &self.rows {
            writeln!(
                out,
                "{:>10} {:>14.6} {:>14.6} {:>12.6} {:>5} {:>9} {:>14.6} {:>14.6} {:>5}",
                r.t,
                r.sup_measured_log,
                r.bound_log,
                r.margin,
                r.pass,
                route_name(r.route),
                r.expansion_sup_log,
                r.expansion_bound_log,
                r.expansion_pass
            )?;
        }
        writeln!(out, "all_pass {}", self.all_pass)?;
        writeln!(out, "decay_slope {}", opt(self.decay_slope))
    }

    /// Rows as CSV followed by a `# decay_slope=` comment line.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<(), csv::Error> {
        {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &self.rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        writeln!(out, "# all_pass={}", self.all_pass)?;
        writeln!(out, "# decay_slope={}", opt(self.decay_slope))?;
        Ok(())
    }
}

fn route_name(r: MeasurementRoute) -> &'static str {
    match r {
        MeasurementRoute::Evaluated => "evaluated",
        MeasurementRoute::LogSpace => "log_space",
    }
}
