//! Trajectory CSV emission.
//!
//! Header: `t,f1,...,fn,angle_max_deg,overlap_min`, one row per sample,
//! UTF-8 with LF line endings. t and the f columns round-trip exactly
//! (17 significant digits); angles are in degrees with 12 significant
//! digits, as is the overlap column.

use std::fmt::Write as _;

use eigres_core::path_track::TrajectorySample;

pub fn header(n: usize) -> String {
    let mut s = String::from("t");
    for i in 1..=n {
        let _ = write!(s, ",f{i}");
    }
    s.push_str(",angle_max_deg,overlap_min\n");
    s
}

pub fn render(samples: &[TrajectorySample], n: usize) -> String {
    let mut out = header(n);
    for sample in samples {
        let _ = write!(out, "{:.16e}", sample.t);
        for &f in &sample.f {
            let _ = write!(out, ",{f:.16e}");
        }
        let degrees = sample.angle_max.to_degrees();
        let _ = writeln!(out, ",{degrees:.11e},{:.11e}", sample.overlap_min);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_for_empty_samples() {
        let out = render(&[], 2);
        assert_eq!(out, "t,f1,f2,angle_max_deg,overlap_min\n");
    }

    #[test]
    fn three_samples_make_four_lines() {
        let samples: Vec<TrajectorySample> = (0..3)
            .map(|i| TrajectorySample {
                t: i as f64 / 2.0,
                f: vec![-1.0, 1.0],
                angle_max: 0.0,
                overlap_min: 1.0,
            })
            .collect();
        let out = render(&samples, 2);
        assert_eq!(out.lines().count(), 4);
        assert!(out.ends_with('\n'));
        assert!(!out.contains('\r'));
    }

    #[test]
    fn t_and_f_columns_round_trip_exactly() {
        let samples = vec![TrajectorySample {
            t: 1.0 / 3.0,
            f: vec![0.1 + 0.2, -1e-17],
            angle_max: 0.25,
            overlap_min: 0.99,
        }];
        let out = render(&samples, 2);
        let row = out.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        for (text, want) in fields[..3].iter().zip([1.0 / 3.0, 0.1 + 0.2, -1e-17]) {
            let parsed: f64 = text.parse().unwrap();
            assert_eq!(parsed, want, "field {text} must round-trip");
            assert_eq!(format!("{parsed:.16e}"), *text);
        }
    }
}
