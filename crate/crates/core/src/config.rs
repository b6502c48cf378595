//! Physical and link parameters for one scenario.

use crate::error::{Error, Result};
use crate::scalar::{count, lit, Scalar};

/// `10^(dB/10)`.
pub fn db_to_linear<T: Scalar>(db: T) -> T {
    lit::<T>(10.0).powf(db / lit(10.0))
}

/// `10·log10(x)`.
pub fn linear_to_db<T: Scalar>(linear: T) -> T {
    lit::<T>(10.0) * linear.log10()
}

/// Raw link quantities from which the average SNRs derive as
/// `ρ = P·d^{-α}/σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget<T> {
    pub transmit_power: T,
    pub distance_actuator: T,
    pub distance_eve: T,
    pub path_loss_exponent: T,
    pub noise_power_actuator: T,
    pub noise_power_eve: T,
}

impl<T: Scalar> LinkBudget<T> {
    pub fn snr_actuator(&self) -> T {
        self.transmit_power * self.distance_actuator.powf(-self.path_loss_exponent) / self.noise_power_actuator
    }

    pub fn snr_eve(&self) -> T {
        self.transmit_power * self.distance_eve.powf(-self.path_loss_exponent) / self.noise_power_eve
    }

    pub fn with_transmit_power(mut self, transmit_power: T) -> Self {
        self.transmit_power = transmit_power;
        self
    }

    fn validate(&self) -> Result<()> {
        let named = [
            ("transmit power P", self.transmit_power),
            ("actuator distance d_A", self.distance_actuator),
            ("eavesdropper distance d_E", self.distance_eve),
            ("actuator noise power σ_A²", self.noise_power_actuator),
            ("eavesdropper noise power σ_E²", self.noise_power_eve),
        ];
        for (name, v) in named {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} = {v} must be positive and finite"
                )));
            }
        }
        if !(self.path_loss_exponent >= T::zero()) || !self.path_loss_exponent.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "path-loss exponent α = {} must be nonnegative",
                self.path_loss_exponent
            )));
        }
        Ok(())
    }
}

/// All parameters of one transmission scenario. SNRs are linear.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig<T> {
    /// Information bits per packet, `B`.
    pub bits: u64,
    /// Channel uses per packet, `N`.
    pub blocklength: u64,
    /// Information leakage tolerance `δ ∈ (0, 1/2)`.
    pub leakage: T,
    /// Average SNR scale at the actuator, `ρ_A`.
    pub snr_actuator: T,
    /// Average per-antenna SNR scale at the eavesdropper, `ρ_E`.
    pub snr_eve: T,
    /// Transmit antennas at the access point, `K_A`.
    pub antennas_ap: u32,
    /// Receive antennas at the eavesdropper, `K_E`.
    pub antennas_eve: u32,
    /// Fraction of power on the information signal, `η ∈ (0, 1]`.
    pub power_split: T,
    /// Optional raw link parameters; when present the SNRs must agree with them.
    pub link: Option<LinkBudget<T>>,
}

impl<T: Scalar> SystemConfig<T> {
    /// Single-antenna access point (`K_A = 1`, `η = 1`).
    pub fn single_antenna(
        bits: u64,
        blocklength: u64,
        leakage: T,
        snr_actuator: T,
        snr_eve: T,
        antennas_eve: u32,
    ) -> Result<Self> {
        Self::multi_antenna(
            bits,
            blocklength,
            leakage,
            snr_actuator,
            snr_eve,
            1,
            antennas_eve,
            T::one(),
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub fn multi_antenna(
        bits: u64,
        blocklength: u64,
        leakage: T,
        snr_actuator: T,
        snr_eve: T,
        antennas_ap: u32,
        antennas_eve: u32,
        power_split: T,
    ) -> Result<Self> {
        let cfg = Self {
            bits,
            blocklength,
            leakage,
            snr_actuator,
            snr_eve,
            antennas_ap,
            antennas_eve,
            power_split,
            link: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds the SNRs from a link budget.
    pub fn from_link(
        bits: u64,
        blocklength: u64,
        leakage: T,
        link: LinkBudget<T>,
        antennas_ap: u32,
        antennas_eve: u32,
        power_split: T,
    ) -> Result<Self> {
        link.validate()?;
        let cfg = Self {
            bits,
            blocklength,
            leakage,
            snr_actuator: link.snr_actuator(),
            snr_eve: link.snr_eve(),
            antennas_ap,
            antennas_eve,
            power_split,
            link: Some(link),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_blocklength(mut self, blocklength: u64) -> Self {
        self.blocklength = blocklength;
        self
    }

    pub fn with_bits(mut self, bits: u64) -> Self {
        self.bits = bits;
        self
    }

    pub fn with_leakage(mut self, leakage: T) -> Self {
        self.leakage = leakage;
        self
    }

    pub fn with_snrs(mut self, snr_actuator: T, snr_eve: T) -> Self {
        self.snr_actuator = snr_actuator;
        self.snr_eve = snr_eve;
        self.link = None;
        self
    }

    pub fn with_antennas(mut self, antennas_ap: u32, antennas_eve: u32) -> Self {
        self.antennas_ap = antennas_ap;
        self.antennas_eve = antennas_eve;
        self
    }

    pub fn with_power_split(mut self, power_split: T) -> Self {
        self.power_split = power_split;
        self
    }

    /// Re-derives both SNRs for a new transmit power. Requires a link budget.
    pub fn with_transmit_power(mut self, transmit_power: T) -> Result<Self> {
        let link = self
            .link
            .ok_or_else(|| Error::Misuse("transmit power sweep needs link-budget parameters".into()))?
            .with_transmit_power(transmit_power);
        link.validate()?;
        self.snr_actuator = link.snr_actuator();
        self.snr_eve = link.snr_eve();
        self.link = Some(link);
        Ok(self)
    }

    /// Checks every invariant; the message names the violated one.
    pub fn validate(&self) -> Result<()> {
        if self.bits == 0 {
            return Err(Error::InvalidConfig("bits per block B must be at least 1".into()));
        }
        if self.blocklength == 0 {
            return Err(Error::InvalidConfig("blocklength N must be at least 1".into()));
        }
        let half = lit::<T>(0.5);
        if !(self.leakage > T::zero() && self.leakage < half) {
            return Err(Error::InvalidConfig(format!(
                "leakage δ = {} violates δ ∈ (0, 1/2)",
                self.leakage
            )));
        }
        for (name, v) in [
            ("actuator SNR ρ_A", self.snr_actuator),
            ("eavesdropper SNR ρ_E", self.snr_eve),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} = {v} must be positive and finite"
                )));
            }
        }
        if self.antennas_ap == 0 {
            return Err(Error::InvalidConfig("antenna count K_A must be at least 1".into()));
        }
        if self.antennas_eve == 0 {
            return Err(Error::InvalidConfig("antenna count K_E must be at least 1".into()));
        }
        if !(self.power_split > T::zero() && self.power_split <= T::one()) {
            return Err(Error::InvalidConfig(format!(
                "power split η = {} violates η ∈ (0, 1]",
                self.power_split
            )));
        }
        if self.antennas_ap == 1 && self.power_split != T::one() {
            return Err(Error::InvalidConfig(format!(
                "power split η = {} but η = 1 is required when K_A = 1",
                self.power_split
            )));
        }
        if let Some(link) = &self.link {
            link.validate()?;
            let tol = lit::<T>(1e-12).max(T::epsilon() * lit(16.0));
            for (name, stated, derived) in [
                ("ρ_A", self.snr_actuator, link.snr_actuator()),
                ("ρ_E", self.snr_eve, link.snr_eve()),
            ] {
                if ((stated - derived) / derived).abs() > tol {
                    return Err(Error::InvalidConfig(format!(
                        "{name} = {stated} disagrees with link budget value {derived}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_single_antenna(&self) -> bool {
        self.antennas_ap == 1
    }

    /// Per-stream artificial-noise to signal power ratio `τ = (η⁻¹-1)/(K_A-1)`;
    /// zero without artificial noise.
    pub fn an_power_ratio(&self) -> T {
        if self.antennas_ap <= 1 || self.power_split == T::one() {
            T::zero()
        } else {
            (self.power_split.recip() - T::one()) / count(self.antennas_ap as u64 - 1)
        }
    }

    /// `E[γ_E] = K_E·ρ_E` for the single-antenna model.
    pub fn mean_eve_snr(&self) -> T {
        count::<T>(self.antennas_eve as u64) * self.snr_eve
    }

    /// Packet rate `B/N` in bits per channel use.
    pub fn rate(&self) -> T {
        count::<T>(self.bits) / count(self.blocklength)
    }
}
