/// Location and spread of one observable over replicates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation over `√count`; zero for a single value.
    pub stderr: f64,
    /// Sample standard deviation over the mean. `None` when the mean is zero
    /// but the values are not all zero.
    pub cv: Option<f64>,
    pub prediction: Option<f64>,
    /// `mean / prediction`, when the prediction is nonzero.
    pub ratio: Option<f64>,
}

pub fn summarize(values: &[f64], prediction: Option<f64>) -> Summary {
    assert!(!values.is_empty(), "summary of no rows");
    let m = values.len();
    let mean = values.iter().sum::<f64>() / m as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
    };
    let sd = if m > 1 {
        (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64).sqrt()
    } else {
        0.0
    };
    let cv = if mean != 0.0 {
        Some(sd / mean.abs())
    } else if values.iter().all(|&x| x == 0.0) {
        Some(0.0)
    } else {
        None
    };
    Summary {
        count: m,
        mean,
        median,
        stderr: sd / (m as f64).sqrt(),
        cv,
        prediction,
        ratio: prediction.filter(|&p| p != 0.0).map(|p| mean / p),
    }
}
