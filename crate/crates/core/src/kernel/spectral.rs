use crate::{Error, Result};

/// A radial spectral density tabulated on a radius grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl SpectralProfile {
    /// Requires `radii[0] = 0`, strictly increasing radii and nonnegative values.
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.len() != values.len() {
            return Err(Error::InvalidParameter {
                name: "profile",
                reason: format!("{} radii for {} values", radii.len(), values.len()),
            });
        }
        if radii[0] != 0.0 {
            return Err(Error::InvalidParameter { name: "radii", reason: "grid must start at 0".into() });
        }
        if radii.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::InvalidParameter { name: "radii", reason: "grid must be strictly increasing".into() });
        }
        if values.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidParameter { name: "values", reason: "spectral values must be >= 0".into() });
        }
        Ok(Self { radii, values })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Piecewise-linear interpolation, constant beyond the last radius.
    pub fn evaluate(&self, r: f64) -> f64 {
        let r = r.abs();
        match self.radii.partition_point(|&g| g <= r) {
            0 => self.values[0],
            i if i == self.radii.len() => self.values[i - 1],
            i => {
                let (r0, r1) = (self.radii[i - 1], self.radii[i]);
                let t = (r - r0) / (r1 - r0);
                self.values[i - 1] * (1.0 - t) + self.values[i] * t
            }
        }
    }

    /// Profile `r ↦ self(factor·r)`, i.e. the same values on radii divided by
    /// `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        crate::positive("factor", factor)?;
        Self::new(self.radii.iter().map(|r| r / factor).collect(), self.values.clone())
    }
}

/// Replaces the profile by its running infimum from the origin: the largest
/// nonincreasing minorant on the grid.
pub fn iron_spectral(profile: &SpectralProfile) -> SpectralProfile {
    let mut running = f64::INFINITY;
    let values = profile
        .values
        .iter()
        .map(|&v| {
            running = running.min(v);
            running
        })
        .collect();
    SpectralProfile { radii: profile.radii.clone(), values }
}

/// Ironed profile rescaled as `r ↦ iron(factor·r)`; the default factor is 2.
pub fn ironed_rescaled(profile: &SpectralProfile, factor: Option<f64>) -> Result<SpectralProfile> {
    iron_spectral(profile).rescaled(factor.unwrap_or(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 * 0.5).collect()
    }

    #[test]
    fn examples() {
        let p = SpectralProfile::new(grid(3), vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(iron_spectral(&p).values(), &[1.0, 0.5, 0.25]);
        let p = SpectralProfile::new(grid(4), vec![1.0, 0.5, 0.8, 0.2]).unwrap();
        assert_eq!(iron_spectral(&p).values(), &[1.0, 0.5, 0.5, 0.2]);
        let p = SpectralProfile::new(grid(5), vec![3.0; 5]).unwrap();
        assert_eq!(iron_spectral(&p), p);
    }

    #[test]
    fn invalid_profiles() {
        assert!(SpectralProfile::new(vec![0.1, 1.0], vec![1.0, 1.0]).is_err());
        assert!(SpectralProfile::new(vec![0.0, 1.0, 1.0], vec![1.0; 3]).is_err());
        assert!(SpectralProfile::new(vec![0.0, 1.0], vec![1.0, -0.1]).is_err());
        assert!(SpectralProfile::new(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn rescaling_by_two() {
        let p = SpectralProfile::new(grid(4), vec![1.0, 0.5, 0.8, 0.2]).unwrap();
        let s = ironed_rescaled(&p, None).unwrap();
        assert_eq!(s.radii(), &[0.0, 0.25, 0.5, 0.75]);
        assert_eq!(s.evaluate(0.5), iron_spectral(&p).evaluate(1.0));
        assert_eq!(s.evaluate(10.0), 0.2);
    }

    proptest! {
        #[test]
        fn ironing_is_idempotent_monotone_and_below(
            v in prop::collection::vec(0.0f64..10.0, 1..40),
            bump in prop::collection::vec(0.0f64..5.0, 40),
        ) {
            let p = SpectralProfile::new(grid(v.len()), v.clone()).unwrap();
            let ip = iron_spectral(&p);
            prop_assert_eq!(iron_spectral(&ip), ip.clone());
            for (w, o) in ip.values().windows(2).zip(ip.values().iter().zip(&v)) {
                prop_assert!(w[1] <= w[0]);
                prop_assert!(o.0 <= o.1);
            }
            let q: Vec<f64> = v.iter().zip(&bump).map(|(a, b)| a + b).collect();
            let iq = iron_spectral(&SpectralProfile::new(grid(q.len()), q).unwrap());
            for (a, b) in ip.values().iter().zip(iq.values()) {
                prop_assert!(a <= b);
            }
        }
    }
}
