//! Recovery-curve output: CSV, JSON and a static SVG rendering.

use std::fmt::Write as _;

use qretro_core::scenarios::{BlochXz, RecoveryCurve, RecoveryPoint, FIG1_DEPOLARIZING};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CSV_HEADER: &str = "belief,theta,in_x,in_z,chan_x,chan_z,rec_x,rec_z";

/// One CSV row. Floats are written with 17 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub belief: String,
    pub theta: f64,
    pub input: BlochXz,
    pub channel: BlochXz,
    pub recovered: BlochXz,
}

impl CurveRow {
    fn new(belief: &str, p: &RecoveryPoint) -> Self {
        Self {
            belief: belief.to_owned(),
            theta: p.theta,
            input: p.input,
            channel: p.channel,
            recovered: p.recovered,
        }
    }
}

pub fn to_csv(curves: &[RecoveryCurve]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in curves {
        for p in &c.points {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                c.belief.name(),
                p.theta,
                p.input[0],
                p.input[1],
                p.channel[0],
                p.channel[1],
                p.recovered[0],
                p.recovered[1]
            );
        }
    }
    out
}

pub fn from_csv(text: &str) -> Result<Vec<CurveRow>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        _ => return Err(CliError::parse("curve CSV", "missing or unexpected header")),
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let context = format!("curve CSV line {}", n + 2);
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(CliError::parse(context, format!("expected 8 fields, found {}", fields.len())));
        }
        let mut nums = [0.0; 7];
        for (slot, f) in nums.iter_mut().zip(&fields[1..]) {
            *slot = f
                .trim()
                .parse()
                .map_err(|_| CliError::parse(&context, format!("not a number: {f:?}")))?;
        }
        rows.push(CurveRow {
            belief: fields[0].to_owned(),
            theta: nums[0],
            input: [nums[1], nums[2]],
            channel: [nums[3], nums[4]],
            recovered: [nums[5], nums[6]],
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkerJson {
    pub label: String,
    #[serde(flatten)]
    pub point: CurveRow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub belief: String,
    pub description: String,
    pub points: Vec<CurveRow>,
    pub markers: Vec<MarkerJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvesJson {
    pub depolarizing: f64,
    pub samples: usize,
    pub curves: Vec<CurveJson>,
}

pub fn to_json_value(curves: &[RecoveryCurve]) -> CurvesJson {
    CurvesJson {
        depolarizing: FIG1_DEPOLARIZING,
        samples: curves.first().map_or(0, |c| c.points.len()),
        curves: curves
            .iter()
            .map(|c| {
                let name = c.belief.name();
                CurveJson {
                    belief: name.to_owned(),
                    description: c.belief.description().to_owned(),
                    points: c.points.iter().map(|p| CurveRow::new(name, p)).collect(),
                    markers: c
                        .markers
                        .iter()
                        .map(|(label, p)| MarkerJson {
                            label: (*label).to_owned(),
                            point: CurveRow::new(name, p),
                        })
                        .collect(),
                }
            })
            .collect(),
    }
}

const PANEL: f64 = 240.0;
const RADIUS: f64 = 100.0;

fn svg_xy(cx: f64, cy: f64, [x, z]: BlochXz) -> (f64, f64) {
    // z points up
    (cx + RADIUS * x, cy - RADIUS * z)
}

fn polyline(out: &mut String, cx: f64, cy: f64, pts: impl Iterator<Item = BlochXz>, stroke: &str, dash: &str) {
    let mut coords = String::new();
    for p in pts {
        let (x, y) = svg_xy(cx, cy, p);
        let _ = write!(coords, "{x:.3},{y:.3} ");
    }
    let _ = writeln!(
        out,
        r#"  <polygon points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"{dash}/>"#,
        coords.trim_end()
    );
}

fn marker(out: &mut String, label: &str, (x, y): (f64, f64)) {
    let _ = match label {
        "0" => writeln!(out, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="5" fill="none" stroke="red" stroke-width="1.5"/>"#),
        "1" => writeln!(out, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="green"/>"#),
        "+" => writeln!(
            out,
            r#"  <path d="M{:.3},{y:.3}H{:.3}M{x:.3},{:.3}V{:.3}" stroke="gold" stroke-width="2"/>"#,
            x - 5.0,
            x + 5.0,
            y - 5.0,
            y + 5.0
        ),
        _ => writeln!(
            out,
            r#"  <path d="M{:.3},{y:.3}H{:.3}" stroke="blue" stroke-width="2"/>"#,
            x - 5.0,
            x + 5.0
        ),
    };
}

/// Four panels in a row. Each shows the dashed unit circle, the input,
/// post-channel and recovered curves, and the `|0⟩, |1⟩, |+⟩, |−⟩` markers
/// at each stage.
pub fn to_svg(curves: &[RecoveryCurve]) -> String {
    let width = PANEL * curves.len() as f64;
    let height = PANEL + 30.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="13">"#
    );
    for (k, c) in curves.iter().enumerate() {
        let cx = PANEL * (k as f64 + 0.5);
        let cy = PANEL / 2.0 + 25.0;
        let _ = writeln!(out, r#"  <text x="{cx}" y="18" text-anchor="middle">{}</text>"#, c.belief.name());
        let _ = writeln!(
            out,
            r#"  <circle cx="{cx}" cy="{cy}" r="{RADIUS}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#
        );
        polyline(&mut out, cx, cy, c.points.iter().map(|p| p.input), "black", "");
        polyline(&mut out, cx, cy, c.points.iter().map(|p| p.channel), "gray", r#" stroke-dasharray="2 2""#);
        polyline(&mut out, cx, cy, c.points.iter().map(|p| p.recovered), "purple", "");
        for (label, p) in &c.markers {
            for xz in [p.input, p.channel, p.recovered] {
                marker(&mut out, label, svg_xy(cx, cy, xz));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qretro_core::scenarios::fig1;

    #[test]
    fn csv_round_trip_is_exact() {
        let curves = fig1(12).unwrap();
        let text = to_csv(&curves);
        let rows = from_csv(&text).unwrap();
        assert_eq!(rows.len(), 48);
        let mut it = rows.iter();
        for c in &curves {
            for p in &c.points {
                let r = it.next().unwrap();
                assert_eq!(r.belief, c.belief.name());
                assert_eq!((r.theta, r.input, r.channel, r.recovered), (p.theta, p.input, p.channel, p.recovered));
            }
        }
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(from_csv("a,b\n").is_err());
        assert!(from_csv(&format!("{CSV_HEADER}\nbeta-s,1,2\n")).is_err());
        assert!(from_csv(&format!("{CSV_HEADER}\nbeta-s,1,2,3,4,5,6,x\n")).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let value = to_json_value(&fig1(8).unwrap());
        let text = serde_json::to_string(&value).unwrap();
        let back: CurvesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, value);
        assert_eq!(back.curves.len(), 4);
        assert_eq!(back.curves[0].markers.len(), 4);
    }

    #[test]
    fn svg_has_four_panels() {
        let svg = to_svg(&fig1(8).unwrap());
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("stroke-dasharray=\"4 3\"").count(), 4);
        assert_eq!(svg.matches("<polygon").count(), 12);
        assert_eq!(svg.matches("fill=\"green\"").count(), 12);
    }
}
