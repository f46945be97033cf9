//! Line charts rendered from CSV text. A chart is a pure function of the CSV
//! and the selected columns, so regenerating it from a saved file gives the
//! same bytes.

use std::fmt::Write;

use crate::CliError;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 140.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;
const TICKS: usize = 5;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Abscissa name, abscissa values and one value column per series.
type Columns = (String, Vec<f64>, Vec<Vec<f64>>);

/// Columns of `csv_text` by name, parsed as numbers. The first column is the
/// abscissa.
fn read_columns(csv_text: &str, series: &[String]) -> Result<Columns, CliError> {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Config(format!("bad CSV header: {e}")))?
        .clone();
    let x_name = headers
        .get(0)
        .ok_or_else(|| CliError::Config("empty CSV header".into()))?
        .to_string();
    let idx = series
        .iter()
        .map(|s| {
            headers
                .iter()
                .position(|h| h == s)
                .ok_or_else(|| CliError::Config(format!("no column '{s}' in CSV")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::Config(format!("non-numeric CSV cell '{s}'")))
    };
    let mut xs = Vec::new();
    let mut ys = vec![Vec::new(); idx.len()];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Config(format!("bad CSV row: {e}")))?;
        xs.push(num(&rec[0])?);
        for (col, &i) in ys.iter_mut().zip(&idx) {
            col.push(num(&rec[i])?);
        }
    }
    Ok((x_name, xs, ys))
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo <= f64::EPSILON * (1.0 + lo.abs()) {
        (lo - 0.5 * (1.0 + lo.abs()), hi + 0.5 * (1.0 + hi.abs()))
    } else {
        (lo, hi)
    }
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// SVG chart of the named columns against the first one.
pub fn chart_from_csv(csv_text: &str, series: &[String]) -> Result<String, CliError> {
    if series.is_empty() {
        return Err(CliError::Config("no series selected for plotting".into()));
    }
    let (x_name, xs, ys) = read_columns(csv_text, series)?;
    let (x0, x1) = range(xs.iter().copied());
    let (y0, y1) = range(ys.iter().flatten().copied());
    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_T + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_T + ph,
            MARGIN_T + ph + 5.0,
            MARGIN_T + ph + 20.0,
            label(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{MARGIN_L}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_L - 5.0,
            MARGIN_L - 8.0,
            py + 4.0,
            label(yv)
        );
    }
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_L}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            sy(0.0),
            MARGIN_L + pw
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_name}</text>"#,
        MARGIN_L + 0.5 * pw,
        HEIGHT - 10.0
    );
    for (i, (name, col)) in series.iter().zip(&ys).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(col)
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = MARGIN_T + 15.0 + 20.0 * i as f64;
        let lx = MARGIN_L + pw + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{name}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
