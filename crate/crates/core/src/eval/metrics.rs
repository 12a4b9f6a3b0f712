use crate::error::{bail, Result};
use crate::model::Label;

/// Binary confusion counts; the minority class is the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionMatrix {
    pub tp: u64,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: u64,
    pub tn: u64,
    pub fp: u64,
}

impl ConfusionMatrix {
    pub fn from_predictions(truth: &[Label], predicted: &[Label]) -> Self {
        let mut cm = ConfusionMatrix::default();
        for (t, p) in truth.iter().zip(predicted) {
            match (t, p) {
                (Label::Minority, Label::Minority) => cm.tp += 1,
                (Label::Minority, Label::Majority) => cm.fn_ += 1,
                (Label::Majority, Label::Majority) => cm.tn += 1,
                (Label::Majority, Label::Minority) => cm.fp += 1,
            }
        }
        cm
    }

    pub fn merge(self, other: ConfusionMatrix) -> Self {
        ConfusionMatrix {
            tp: self.tp + other.tp,
            fn_: self.fn_ + other.fn_,
            tn: self.tn + other.tn,
            fp: self.fp + other.fp,
        }
    }

    pub fn sensitivity(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn specificity(&self) -> Option<f64> {
        ratio(self.tn, self.tn + self.fp)
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// `sqrt(sensitivity * specificity)`.
pub fn g_mean(cm: &ConfusionMatrix) -> Result<f64> {
    match (cm.sensitivity(), cm.specificity()) {
        (Some(se), Some(sp)) => Ok(crate::math::sqrt(se * sp)),
        (None, _) => bail!(UndefinedMetric, "g-mean needs minority samples in the test set"),
        (_, None) => bail!(UndefinedMetric, "g-mean needs majority samples in the test set"),
    }
}
