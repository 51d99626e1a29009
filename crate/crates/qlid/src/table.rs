//! CSV writers and the number format shared by every output.

use std::io::Write;
use std::path::Path;

use qlid_core::{EuSweep, SweepCurve};

use crate::error::{HarnessError, Result};

/// Six significant digits in the style of C's `%g`: trailing zeros trimmed,
/// exponent form below `1e-4` and from `1e6` on.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> HarnessError + '_ {
    move |source| HarnessError::Csv { path: path.to_path_buf(), source }
}

fn io_error(path: &Path) -> impl Fn(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

/// `theta,probability`, one line per sample; degenerate samples leave the
/// probability empty.
pub fn write_probability_sweep<W: Write>(curve: &SweepCurve, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "probability"])?;
    for s in &curve.samples {
        w.write_record([format_sig(s.theta), optional(s.value)])?;
    }
    w.flush()?;
    Ok(())
}

/// `theta,context,eu_action_<a>...`, one line per sample and context.
pub fn write_eu_sweep<W: Write>(sweep: &EuSweep, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["theta".to_string(), "context".to_string()];
    header.extend(sweep.actions.iter().map(|a| format!("eu_action_{a}")));
    w.write_record(&header)?;
    let samples = sweep.curves.first().and_then(|c| c.first()).map_or(0, |c| c.samples.len());
    for i in 0..samples {
        for (z, context) in sweep.contexts.iter().enumerate() {
            let mut row = vec![format_sig(sweep.curves[z][0].samples[i].theta), context.clone()];
            row.extend(sweep.curves[z].iter().map(|c| optional(c.samples[i].value)));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `context,favoured,baseline,start,end`: intervals where the favoured action
/// strictly beats the baseline.
pub fn write_dominance<W: Write>(sweep: &EuSweep, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["context", "favoured", "baseline", "start", "end"])?;
    for (z, context) in sweep.contexts.iter().enumerate() {
        for iv in &sweep.dominance[z] {
            w.write_record([
                context.clone(),
                sweep.actions[sweep.favoured].clone(),
                sweep.actions[sweep.baseline].clone(),
                format_sig(iv.start),
                format_sig(iv.end),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Creates `path` and hands a buffered writer to `f`.
pub fn write_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut std::io::BufWriter<std::fs::File>) -> csv::Result<()>,
{
    let file = std::fs::File::create(path).map_err(io_error(path))?;
    let mut buf = std::io::BufWriter::new(file);
    f(&mut buf).map_err(csv_error(path))?;
    buf.flush().map_err(io_error(path))
}

/// Sidecar path for the dominance table of an EU sweep: `x.csv` → `x.dominance.csv`.
pub fn dominance_path(path: &Path) -> std::path::PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.dominance.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.63, "0.63"),
            (2.8151, "2.8151"),
            (-2129.94342081506, "-2129.94"),
            (0.6300014635324985, "0.630001"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (9.9999996, "10"),
            (-0.5, "-0.5"),
            (f64::NAN, "nan"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig(x), want, "{x}");
        }
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(dominance_path(Path::new("/tmp/eu.csv")), Path::new("/tmp/eu.dominance.csv"));
    }
}
