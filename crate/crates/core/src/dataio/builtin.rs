use crate::metrics::DecileShares;
use crate::simple::TailShareObservation;

use super::GroupedDistribution;

struct Row {
    country: &'static str,
    year: i32,
    gini: f64,
    deciles: [f64; 10],
    /// bottom, top, published ratio
    tail10: (f64, f64, f64),
    tail5: (f64, f64, f64),
}

const ROWS: [Row; 4] = [
    Row {
        country: "Malta",
        year: 2018,
        gini: 0.287,
        deciles: [0.0360, 0.0510, 0.0620, 0.0720, 0.0830, 0.0940, 0.1070, 0.1210, 0.1440, 0.2300],
        tail10: (0.036, 0.230, 0.157),
        tail5: (0.016, 0.139, 0.115),
    },
    Row {
        country: "Taiwan",
        year: 2016,
        gini: 0.315,
        deciles: [0.0336, 0.0491, 0.0590, 0.0684, 0.0779, 0.0890, 0.1022, 0.1199, 0.1493, 0.2517],
        tail10: (0.034, 0.252, 0.133),
        tail5: (0.014, 0.156, 0.088),
    },
    Row {
        country: "USA",
        year: 2016,
        gini: 0.411,
        deciles: [0.0179, 0.0344, 0.0457, 0.0572, 0.0693, 0.0832, 0.1005, 0.1245, 0.1625, 0.3046],
        tail10: (0.018, 0.305, 0.059),
        tail5: (0.006, 0.196, 0.029),
    },
    Row {
        country: "Côte d'Ivoire",
        year: 2015,
        gini: 0.590,
        deciles: [0.0074, 0.0178, 0.0263, 0.0353, 0.0459, 0.0583, 0.0759, 0.1026, 0.1535, 0.4769],
        tail10: (0.007, 0.477, 0.016),
        tail5: (0.002, 0.350, 0.006),
    },
];

fn tail(m: f64, (bottom, top, ratio): (f64, f64, f64)) -> TailShareObservation {
    TailShareObservation::new(m, bottom, top)
        .and_then(|o| o.with_published_ratio(ratio))
        .expect("built-in tail shares are valid")
}

/// Malta 2018, Taiwan 2016, USA 2016 and Côte d'Ivoire 2015: Gini index,
/// decile shares and 10%/5% tail shares as published, unrounded and
/// unadjusted. Decile sums drift from 1 by up to 2e-4 through rounding.
pub fn builtin_paper_dataset() -> Vec<GroupedDistribution> {
    ROWS.iter()
        .map(|r| GroupedDistribution {
            country: r.country.to_string(),
            year: r.year,
            gini: r.gini,
            decile_shares: Some(DecileShares::new(&r.deciles).expect("built-in shares are valid")),
            tail_observations: vec![tail(0.10, r.tail10), tail(0.05, r.tail5)],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records() {
        let data = builtin_paper_dataset();
        assert_eq!(data.len(), 4);
        let ginis: Vec<f64> = data.iter().map(|r| r.gini).collect();
        assert_eq!(ginis, [0.287, 0.315, 0.411, 0.590]);
        assert_eq!(data[0].country, "Malta");
        assert_eq!(data[0].year, 2018);
        assert_eq!(data[0].decile_shares.unwrap()[9], 0.230);
        let civ = &data[3];
        assert_eq!(civ.country, "Côte d'Ivoire");
        let t5 = civ.tail_observation(0.05).unwrap();
        assert_eq!((t5.bottom_share(), t5.top_share()), (0.002, 0.350));
    }

    #[test]
    fn all_records_validate() {
        let data = builtin_paper_dataset();
        for (i, r) in data.iter().enumerate() {
            assert!(r.validate(i as u64 + 2).unwrap().is_empty());
        }
    }
}
