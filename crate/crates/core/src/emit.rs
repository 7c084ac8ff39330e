//! JSON and CSV serialization of reports and trajectories.
//!
//! Floats are written with 17 significant digits so that every output
//! parses back to the identical `f64`.

use std::io;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::bench::{BenchReport, BenchRow, TrajectoryPoint};
use crate::closed_form::GammaImpl;
use crate::cylinder::CylPoint;
use crate::error::{Error, Result};
use crate::homotopy_data::{SpacePoint, UnitParam};
use crate::verify::{CheckReport, Witness};

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(field: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("not a number: {field:?}")))
}

fn parse_int<T: std::str::FromStr>(field: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("not an integer: {field:?}")))
}

/// Pretty JSON with every float at full precision.
struct Precise<'a>(PrettyFormatter<'a>);

impl Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Compact JSON with every float at full precision.
struct PreciseCompact;

impl Formatter for PreciseCompact {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn to_json_compact<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseCompact);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv fields are UTF-8"))
}

const CHECK_HEADER: [&str; 9] = [
    "check_name",
    "fixture",
    "impl",
    "samples",
    "max_dev",
    "mean_dev",
    "tol",
    "pass",
    "witnesses",
];

/// One row per report; witnesses go in a JSON-valued column.
pub fn checks_to_csv(reports: &[CheckReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CHECK_HEADER)?;
    for r in reports {
        w.write_record([
            r.check_name.clone(),
            r.fixture.clone(),
            r.implementation
                .map(|i| i.as_str().to_string())
                .unwrap_or_default(),
            r.samples.to_string(),
            fmt_f64(r.max_dev),
            fmt_f64(r.mean_dev),
            fmt_f64(r.tol),
            r.pass.to_string(),
            to_json_compact(&r.witnesses)?,
        ])?;
    }
    finish_csv(w)
}

pub fn checks_from_csv(text: &str) -> Result<Vec<CheckReport>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        if rec.len() != CHECK_HEADER.len() {
            return Err(Error::Config(format!(
                "expected {} columns, got {}",
                CHECK_HEADER.len(),
                rec.len()
            )));
        }
        let witnesses: Vec<Witness> = from_json(&rec[8])?;
        out.push(CheckReport {
            check_name: rec[0].to_string(),
            fixture: rec[1].to_string(),
            implementation: match &rec[2] {
                "" => None,
                s => Some(s.parse::<GammaImpl>()?),
            },
            samples: parse_int(&rec[3])?,
            max_dev: parse_f64(&rec[4])?,
            mean_dev: parse_f64(&rec[5])?,
            tol: parse_f64(&rec[6])?,
            pass: parse_int(&rec[7])?,
            witnesses,
        });
    }
    Ok(out)
}

const BENCH_HEADER: [&str; 10] = [
    "fixture",
    "seed",
    "impl",
    "grid_points",
    "reps",
    "median_ns_per_eval",
    "p10_ns",
    "p90_ns",
    "checksum",
    "agreement_checksum",
];

pub fn bench_to_csv(report: &BenchReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BENCH_HEADER)?;
    for row in &report.rows {
        w.write_record([
            report.fixture.clone(),
            report.seed.to_string(),
            row.implementation.as_str().to_string(),
            row.grid_points.to_string(),
            row.reps.to_string(),
            fmt_f64(row.median_ns_per_eval),
            fmt_f64(row.p10_ns),
            fmt_f64(row.p90_ns),
            row.checksum.to_string(),
            row.agreement_checksum.to_string(),
        ])?;
    }
    finish_csv(w)
}

pub fn bench_from_csv(text: &str) -> Result<BenchReport> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut head: Option<(String, u64)> = None;
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        if rec.len() != BENCH_HEADER.len() {
            return Err(Error::Config(format!(
                "expected {} columns, got {}",
                BENCH_HEADER.len(),
                rec.len()
            )));
        }
        let this = (rec[0].to_string(), parse_int::<u64>(&rec[1])?);
        match &head {
            None => head = Some(this),
            Some(h) if *h != this => {
                return Err(Error::Config("rows from different benchmark runs".into()));
            }
            Some(_) => {}
        }
        rows.push(BenchRow {
            implementation: rec[2].parse()?,
            grid_points: parse_int(&rec[3])?,
            reps: parse_int(&rec[4])?,
            median_ns_per_eval: parse_f64(&rec[5])?,
            p10_ns: parse_f64(&rec[6])?,
            p90_ns: parse_f64(&rec[7])?,
            checksum: parse_int(&rec[8])?,
            agreement_checksum: parse_int(&rec[9])?,
        });
    }
    let (fixture, seed) = head.ok_or_else(|| Error::Config("benchmark CSV has no rows".into()))?;
    Ok(BenchReport {
        fixture,
        seed,
        rows,
    })
}

/// Columns `s, kind, t, c0, c1, ...`; `t` is empty for base points. All
/// points must share one dimension.
pub fn trajectory_to_csv(points: &[TrajectoryPoint]) -> Result<String> {
    let dim = points.first().map_or(0, |p| p.point.coords().len());
    if let Some(bad) = points.iter().find(|p| p.point.coords().len() != dim) {
        return Err(Error::Dimension {
            space: "trajectory",
            expected: dim,
            got: bad.point.coords().len(),
        });
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["s".to_string(), "kind".to_string(), "t".to_string()];
    header.extend((0..dim).map(|i| format!("c{i}")));
    w.write_record(&header)?;
    for p in points {
        let mut rec = vec![fmt_f64(p.s)];
        match &p.point {
            CylPoint::Cyl { t, .. } => {
                rec.push("cyl".into());
                rec.push(fmt_f64(t.get()));
            }
            CylPoint::Base { .. } => {
                rec.push("base".into());
                rec.push(String::new());
            }
        }
        rec.extend(p.point.coords().iter().map(|&c| fmt_f64(c)));
        w.write_record(&rec)?;
    }
    finish_csv(w)
}

pub fn trajectory_from_csv(text: &str) -> Result<Vec<TrajectoryPoint>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        if rec.len() < 4 {
            return Err(Error::Config(
                "trajectory rows need s, kind, t and coordinates".into(),
            ));
        }
        let coords = rec
            .iter()
            .skip(3)
            .map(parse_f64)
            .collect::<Result<Vec<f64>>>()?;
        let coords = SpacePoint::new(&coords)?;
        let point = match (&rec[1], &rec[2]) {
            ("cyl", t) => CylPoint::cyl(coords, UnitParam::new(parse_f64(t)?)?),
            ("base", "") => CylPoint::base(coords),
            (kind, t) => return Err(Error::Config(format!("bad point kind/t: {kind:?}/{t:?}"))),
        };
        out.push(TrajectoryPoint {
            s: parse_f64(&rec[0])?,
            point,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{WitnessInput, WitnessValue};
    use proptest::prelude::*;

    fn point(dim: usize) -> impl Strategy<Value = CylPoint> {
        let coords = proptest::collection::vec(-1e6f64..1e6, dim);
        prop_oneof![
            (coords.clone(), 0.0f64..=1.0).prop_map(|(c, t)| CylPoint::cyl(
                SpacePoint::new(&c).unwrap(),
                UnitParam::new(t).unwrap()
            )),
            coords.prop_map(|c| CylPoint::base(SpacePoint::new(&c).unwrap())),
        ]
    }

    fn any_impl() -> impl Strategy<Value = GammaImpl> {
        prop_oneof![
            Just(GammaImpl::Compositional),
            Just(GammaImpl::Printed),
            Just(GammaImpl::Corrected)
        ]
    }

    fn witness() -> impl Strategy<Value = Witness> {
        (
            any::<usize>(),
            point(2),
            proptest::collection::vec(0.0f64..=1.0, 0..4),
            point(2),
            proptest::collection::vec(-5.0f64..5.0, 1..3),
            any::<f64>().prop_filter("finite", |v| v.is_finite()),
        )
            .prop_map(|(index, p, params, a, coords, dev)| Witness {
                input: WitnessInput {
                    index,
                    value: WitnessValue::Point(p),
                    params,
                },
                out_a: WitnessValue::Point(a),
                out_b: WitnessValue::Coords(coords),
                dev,
            })
    }

    fn report() -> impl Strategy<Value = CheckReport> {
        (
            "[a-z:_-]{1,20}",
            "[a-z-]{1,12}",
            proptest::option::of(any_impl()),
            any::<usize>(),
            any::<f64>().prop_filter("finite", |v| v.is_finite()),
            any::<f64>().prop_filter("finite", |v| v.is_finite()),
            1e-15f64..1.0,
            any::<bool>(),
            proptest::collection::vec(witness(), 0..4),
        )
            .prop_map(
                |(
                    check_name,
                    fixture,
                    implementation,
                    samples,
                    max_dev,
                    mean_dev,
                    tol,
                    pass,
                    witnesses,
                )| {
                    CheckReport {
                        check_name,
                        fixture,
                        implementation,
                        samples,
                        max_dev,
                        mean_dev,
                        tol,
                        pass,
                        witnesses,
                    }
                },
            )
    }

    fn bench_report() -> impl Strategy<Value = BenchReport> {
        let row = (
            any_impl(),
            any::<usize>(),
            any::<usize>(),
            0.0f64..1e9,
            0.0f64..1e9,
            0.0f64..1e9,
            any::<u64>(),
            any::<u64>(),
        )
            .prop_map(
                |(
                    implementation,
                    grid_points,
                    reps,
                    median_ns_per_eval,
                    p10_ns,
                    p90_ns,
                    checksum,
                    agreement_checksum,
                )| {
                    BenchRow {
                        implementation,
                        grid_points,
                        reps,
                        median_ns_per_eval,
                        p10_ns,
                        p90_ns,
                        checksum,
                        agreement_checksum,
                    }
                },
            );
        (
            "[a-z-]{1,12}",
            any::<u64>(),
            proptest::collection::vec(row, 1..4),
        )
            .prop_map(|(fixture, seed, rows)| BenchReport {
                fixture,
                seed,
                rows,
            })
    }

    #[test]
    fn floats_keep_17_digits() {
        let text = to_json(&[0.1f64, 1.0 / 3.0]).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn trajectory_csv_layout() {
        let pts = vec![
            TrajectoryPoint {
                s: 0.0,
                point: CylPoint::base(SpacePoint::new(&[3.0]).unwrap()),
            },
            TrajectoryPoint {
                s: 1.0,
                point: CylPoint::top(SpacePoint::new(&[3.0]).unwrap()),
            },
        ];
        let text = trajectory_to_csv(&pts).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s,kind,t,c0");
        assert_eq!(lines[1], "0.0000000000000000e0,base,,3.0000000000000000e0");
        assert!(lines[2].starts_with("1.0000000000000000e0,cyl,1.0000000000000000e0,"));
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        let pts = vec![
            TrajectoryPoint {
                s: 0.0,
                point: CylPoint::base(SpacePoint::new(&[3.0]).unwrap()),
            },
            TrajectoryPoint {
                s: 1.0,
                point: CylPoint::base(SpacePoint::new(&[3.0, 1.0]).unwrap()),
            },
        ];
        assert!(matches!(
            trajectory_to_csv(&pts),
            Err(Error::Dimension { .. })
        ));
    }

    proptest! {
        #[test]
        fn check_reports_round_trip(reports in proptest::collection::vec(report(), 0..4)) {
            prop_assert_eq!(&from_json::<Vec<CheckReport>>(&to_json(&reports).unwrap()).unwrap(), &reports);
            prop_assert_eq!(&checks_from_csv(&checks_to_csv(&reports).unwrap()).unwrap(), &reports);
        }

        #[test]
        fn bench_reports_round_trip(r in bench_report()) {
            prop_assert_eq!(&from_json::<BenchReport>(&to_json(&r).unwrap()).unwrap(), &r);
            prop_assert_eq!(&bench_from_csv(&bench_to_csv(&r).unwrap()).unwrap(), &r);
        }

        #[test]
        fn trajectories_round_trip(pts in proptest::collection::vec((0.0f64..=1.0, point(2)), 1..6)) {
            let pts: Vec<TrajectoryPoint> = pts.into_iter().map(|(s, point)| TrajectoryPoint { s, point }).collect();
            prop_assert_eq!(&trajectory_from_csv(&trajectory_to_csv(&pts).unwrap()).unwrap(), &pts);
            prop_assert_eq!(&from_json::<Vec<TrajectoryPoint>>(&to_json(&pts).unwrap()).unwrap(), &pts);
        }
    }
}
