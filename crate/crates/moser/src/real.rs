use std::fmt::Debug;

use num_traits::Float;

/// Scalar type of the numeric layer.
pub trait Real: Float + Send + Sync + Debug + 'static {
    fn of(v: f64) -> Self {
        Self::from(v).expect("finite constant")
    }

    fn of_usize(v: usize) -> Self {
        Self::from(v).expect("small integer")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}

impl Real for f64 {}
