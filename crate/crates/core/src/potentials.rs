//! Confinement potential families: hard-wall boxes, harmonic wells, and the
//! partitioned variants obtained by placing an internal wall or a Gaussian
//! bump at position `l` inside a domain of fixed total length.
//!
//! Every variant imposes Dirichlet walls at x = 0 and x = L (the harmonic
//! variant at its own `domain_nm`). The partition position `l` is the shape
//! parameter: moving it deforms the potential without changing the domain
//! size.

use crate::constants::kinetic_coefficient;
use crate::error::{Error, Result};

/// Geometry of the confining potential. Lengths in nm, energies in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// Flat-bottomed box with hard walls at 0 and `length_nm`.
    InfiniteWell { length_nm: f64 },
    /// Parabola ħ²/(2m·L_osc⁴)·(x − center)² inside hard walls at 0 and
    /// `domain_nm`. With `domain_nm` well beyond the classical turning
    /// points the walls are spectrally irrelevant.
    Harmonic {
        osc_length_nm: f64,
        domain_nm: f64,
        center_nm: f64,
    },
    /// Box with an impenetrable wall at `partition_nm`, splitting the domain
    /// into two independent wells. Represented structurally; it has no
    /// pointwise value at the partition.
    InfiniteWellInfinitePartition { length_nm: f64, partition_nm: f64 },
    /// Box with a Gaussian bump of height `height_ev` and width `width_nm`
    /// centered at `partition_nm`.
    InfiniteWellGaussianBump {
        length_nm: f64,
        partition_nm: f64,
        height_ev: f64,
        width_nm: f64,
    },
    /// Parabola centered at L/2 (oscillator length `osc_length_nm`) plus a
    /// Gaussian bump at `partition_nm`, inside hard walls at 0 and `length_nm`.
    HarmonicGaussianBump {
        length_nm: f64,
        osc_length_nm: f64,
        partition_nm: f64,
        height_ev: f64,
        width_nm: f64,
    },
}

/// A confinement geometry together with the particle's effective-mass ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub geometry: Geometry,
    pub mass_ratio: f64,
}

fn gaussian_bump(x: f64, l: f64, h: f64, w: f64) -> f64 {
    let d = x - l;
    h * (-d * d / (2.0 * w * w)).exp()
}

impl PotentialSpec {
    pub fn new(geometry: Geometry, mass_ratio: f64) -> Self {
        PotentialSpec {
            geometry,
            mass_ratio,
        }
    }

    /// Total domain length: distance between the two hard walls.
    pub fn domain_length_nm(&self) -> f64 {
        match self.geometry {
            Geometry::InfiniteWell { length_nm }
            | Geometry::InfiniteWellInfinitePartition { length_nm, .. }
            | Geometry::InfiniteWellGaussianBump { length_nm, .. }
            | Geometry::HarmonicGaussianBump { length_nm, .. } => length_nm,
            Geometry::Harmonic { domain_nm, .. } => domain_nm,
        }
    }

    /// The size parameter a pressure differentiates against: the wall
    /// separation for box-like variants, the oscillator length for the pure
    /// harmonic well (its effective size; the bounding walls are a numerical
    /// device there).
    pub fn size_nm(&self) -> f64 {
        match self.geometry {
            Geometry::Harmonic { osc_length_nm, .. } => osc_length_nm,
            _ => self.domain_length_nm(),
        }
    }

    /// Rescale the size parameter, keeping the shape fixed: the partition
    /// stays at the same fraction l/L, bump width stays absolute, the pure
    /// harmonic well scales its bounding box with the oscillator length, and
    /// bump-variant oscillator lengths stay absolute.
    pub fn with_size(&self, new_size_nm: f64) -> Self {
        let geometry = match self.geometry {
            Geometry::InfiniteWell { .. } => Geometry::InfiniteWell {
                length_nm: new_size_nm,
            },
            Geometry::Harmonic {
                osc_length_nm,
                domain_nm,
                center_nm,
            } => {
                let scale = new_size_nm / osc_length_nm;
                Geometry::Harmonic {
                    osc_length_nm: new_size_nm,
                    domain_nm: domain_nm * scale,
                    center_nm: center_nm * scale,
                }
            }
            Geometry::InfiniteWellInfinitePartition {
                length_nm,
                partition_nm,
            } => Geometry::InfiniteWellInfinitePartition {
                length_nm: new_size_nm,
                partition_nm: partition_nm / length_nm * new_size_nm,
            },
            Geometry::InfiniteWellGaussianBump {
                length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => Geometry::InfiniteWellGaussianBump {
                length_nm: new_size_nm,
                partition_nm: partition_nm / length_nm * new_size_nm,
                height_ev,
                width_nm,
            },
            Geometry::HarmonicGaussianBump {
                length_nm,
                osc_length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => Geometry::HarmonicGaussianBump {
                length_nm: new_size_nm,
                osc_length_nm,
                partition_nm: partition_nm / length_nm * new_size_nm,
                height_ev,
                width_nm,
            },
        };
        PotentialSpec {
            geometry,
            mass_ratio: self.mass_ratio,
        }
    }

    /// Partition position for the shape variants, if the variant has one.
    pub fn partition_nm(&self) -> Option<f64> {
        match self.geometry {
            Geometry::InfiniteWellInfinitePartition { partition_nm, .. }
            | Geometry::InfiniteWellGaussianBump { partition_nm, .. }
            | Geometry::HarmonicGaussianBump { partition_nm, .. } => Some(partition_nm),
            _ => None,
        }
    }

    /// Same spec with the partition moved to `l`.
    pub fn with_partition(&self, l: f64) -> Result<Self> {
        let geometry = match self.geometry {
            Geometry::InfiniteWellInfinitePartition { length_nm, .. } => {
                Geometry::InfiniteWellInfinitePartition {
                    length_nm,
                    partition_nm: l,
                }
            }
            Geometry::InfiniteWellGaussianBump {
                length_nm,
                height_ev,
                width_nm,
                ..
            } => Geometry::InfiniteWellGaussianBump {
                length_nm,
                partition_nm: l,
                height_ev,
                width_nm,
            },
            Geometry::HarmonicGaussianBump {
                length_nm,
                osc_length_nm,
                height_ev,
                width_nm,
                ..
            } => Geometry::HarmonicGaussianBump {
                length_nm,
                osc_length_nm,
                partition_nm: l,
                height_ev,
                width_nm,
            },
            _ => {
                return Err(Error::UnsupportedVariant(
                    "this potential has no partition position".into(),
                ))
            }
        };
        Ok(PotentialSpec {
            geometry,
            mass_ratio: self.mass_ratio,
        })
    }

    /// All invariant violations, empty when the spec is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.mass_ratio > 0.0) {
            errs.push(format!(
                "mass_ratio must be positive, got {}",
                self.mass_ratio
            ));
        }
        let check_length = |errs: &mut Vec<String>, name: &str, v: f64| {
            if !(v > 0.0) || !v.is_finite() {
                errs.push(format!("{name} must be positive and finite, got {v}"));
            }
        };
        let check_partition = |errs: &mut Vec<String>, l: f64, length: f64| {
            if !(l > 0.0 && l < length) {
                errs.push(format!(
                    "l must lie strictly inside (0, L): l = {l}, L = {length}"
                ));
            }
        };
        let check_bump = |errs: &mut Vec<String>, h: f64, w: f64| {
            if !(h >= 0.0) || !h.is_finite() {
                errs.push(format!("h must be non-negative, got {h}"));
            }
            if !(w > 0.0) || !w.is_finite() {
                errs.push(format!("w must be positive, got {w}"));
            }
        };
        match self.geometry {
            Geometry::InfiniteWell { length_nm } => {
                check_length(&mut errs, "L", length_nm);
            }
            Geometry::Harmonic {
                osc_length_nm,
                domain_nm,
                center_nm,
            } => {
                check_length(&mut errs, "L_osc", osc_length_nm);
                check_length(&mut errs, "L_domain", domain_nm);
                if !(center_nm > 0.0 && center_nm < domain_nm) {
                    errs.push(format!(
                        "center must lie strictly inside (0, L_domain): center = {center_nm}, L_domain = {domain_nm}"
                    ));
                }
            }
            Geometry::InfiniteWellInfinitePartition {
                length_nm,
                partition_nm,
            } => {
                check_length(&mut errs, "L", length_nm);
                check_partition(&mut errs, partition_nm, length_nm);
            }
            Geometry::InfiniteWellGaussianBump {
                length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => {
                check_length(&mut errs, "L", length_nm);
                check_partition(&mut errs, partition_nm, length_nm);
                check_bump(&mut errs, height_ev, width_nm);
            }
            Geometry::HarmonicGaussianBump {
                length_nm,
                osc_length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => {
                check_length(&mut errs, "L", length_nm);
                check_length(&mut errs, "L_osc", osc_length_nm);
                check_partition(&mut errs, partition_nm, length_nm);
                check_bump(&mut errs, height_ev, width_nm);
            }
        }
        errs
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let errs = self.validate();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(errs.join("; ")))
        }
    }

    /// Potential value at `x` (eV), for variants with a pointwise value.
    ///
    /// The infinite-partition variant is handled by domain splitting in the
    /// solver and has no pointwise value; asking for one is an error.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.ensure_valid()?;
        let length = self.domain_length_nm();
        if !(0.0..=length).contains(&x) {
            return Err(Error::Domain(format!(
                "x = {x} nm outside the domain [0, {length}] nm"
            )));
        }
        if matches!(self.geometry, Geometry::InfiniteWellInfinitePartition { .. }) {
            return Err(Error::UnsupportedVariant(
                "infinite partition has no pointwise value; solve it by domain splitting".into(),
            ));
        }
        let kc = kinetic_coefficient(self.mass_ratio)?;
        Ok(self.evaluate_unchecked(x, kc))
    }

    /// Pointwise value without revalidation; `kc` is the caller's hoisted
    /// kinetic coefficient. The spec must be valid and pointwise-evaluable.
    pub(crate) fn evaluate_unchecked(&self, x: f64, kc: f64) -> f64 {
        match self.geometry {
            Geometry::InfiniteWell { .. } | Geometry::InfiniteWellInfinitePartition { .. } => 0.0,
            Geometry::Harmonic {
                osc_length_nm,
                center_nm,
                ..
            } => {
                let c = kc / osc_length_nm.powi(4);
                let d = x - center_nm;
                c * d * d
            }
            Geometry::InfiniteWellGaussianBump {
                partition_nm,
                height_ev,
                width_nm,
                ..
            } => gaussian_bump(x, partition_nm, height_ev, width_nm),
            Geometry::HarmonicGaussianBump {
                length_nm,
                osc_length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => {
                let c = kc / osc_length_nm.powi(4);
                let d = x - 0.5 * length_nm;
                c * d * d + gaussian_bump(x, partition_nm, height_ev, width_nm)
            }
        }
    }

    /// Reflect the shape parameter: l → L − l. Harmonic centers reflect too,
    /// so a centered parabola is a fixed point. Involutive.
    pub fn mirror(&self) -> Self {
        let geometry = match self.geometry {
            Geometry::InfiniteWell { length_nm } => Geometry::InfiniteWell { length_nm },
            Geometry::Harmonic {
                osc_length_nm,
                domain_nm,
                center_nm,
            } => Geometry::Harmonic {
                osc_length_nm,
                domain_nm,
                center_nm: domain_nm - center_nm,
            },
            Geometry::InfiniteWellInfinitePartition {
                length_nm,
                partition_nm,
            } => Geometry::InfiniteWellInfinitePartition {
                length_nm,
                partition_nm: length_nm - partition_nm,
            },
            Geometry::InfiniteWellGaussianBump {
                length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => Geometry::InfiniteWellGaussianBump {
                length_nm,
                partition_nm: length_nm - partition_nm,
                height_ev,
                width_nm,
            },
            Geometry::HarmonicGaussianBump {
                length_nm,
                osc_length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => Geometry::HarmonicGaussianBump {
                length_nm,
                osc_length_nm,
                partition_nm: length_nm - partition_nm,
                height_ev,
                width_nm,
            },
        };
        PotentialSpec {
            geometry,
            mass_ratio: self.mass_ratio,
        }
    }

    /// Stable FNV-1a hash of the spec parameters, used to tag spectra with
    /// the potential they came from.
    pub fn spec_hash(&self) -> u64 {
        let mut h = 0xcbf29ce484222325u64;
        let mut feed = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        let tag: u8 = match self.geometry {
            Geometry::InfiniteWell { .. } => 0,
            Geometry::Harmonic { .. } => 1,
            Geometry::InfiniteWellInfinitePartition { .. } => 2,
            Geometry::InfiniteWellGaussianBump { .. } => 3,
            Geometry::HarmonicGaussianBump { .. } => 4,
        };
        feed(&[tag]);
        let fields: Vec<f64> = match self.geometry {
            Geometry::InfiniteWell { length_nm } => vec![length_nm],
            Geometry::Harmonic {
                osc_length_nm,
                domain_nm,
                center_nm,
            } => vec![osc_length_nm, domain_nm, center_nm],
            Geometry::InfiniteWellInfinitePartition {
                length_nm,
                partition_nm,
            } => vec![length_nm, partition_nm],
            Geometry::InfiniteWellGaussianBump {
                length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => vec![length_nm, partition_nm, height_ev, width_nm],
            Geometry::HarmonicGaussianBump {
                length_nm,
                osc_length_nm,
                partition_nm,
                height_ev,
                width_nm,
            } => vec![
                length_nm,
                osc_length_nm,
                partition_nm,
                height_ev,
                width_nm,
            ],
        };
        for f in fields {
            feed(&f.to_bits().to_le_bytes());
        }
        feed(&self.mass_ratio.to_bits().to_le_bytes());
        h
    }
}
