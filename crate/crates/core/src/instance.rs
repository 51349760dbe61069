//! Characteristic-function instances.

use crate::coalition::{check_agent_count, CoalitionIndex};
use crate::error::{CsgError, Result};
use crate::instances::Distribution;
use crate::structure::CoalitionStructure;

/// Where an instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InstanceMeta {
    /// `None` for hand-written or imported tables.
    pub dist: Option<Distribution>,
    pub seed: Option<u64>,
}

/// Agent count plus the dense table of coalition values.
///
/// The table is indexed by coalition mask. Slot 0 stands for the empty
/// coalition and always holds 0; it is never part of the `2^n - 1` values.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    table: Vec<f64>,
    meta: InstanceMeta,
}

impl Instance {
    /// `values[c - 1]` is the value of the coalition with index `c`.
    pub fn new(n: usize, values: Vec<f64>, meta: InstanceMeta) -> Result<Self> {
        check_agent_count(n)?;
        let expected = (1usize << n) - 1;
        if values.len() != expected {
            return Err(CsgError::WrongValueCount {
                expected,
                got: values.len(),
            });
        }
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(CsgError::InvalidValue {
                index: i + 1,
                value: v,
            });
        }
        let mut table = Vec::with_capacity(expected + 1);
        table.push(0.0);
        table.extend(values);
        Ok(Self { n, table, meta })
    }

    /// Like [`Instance::new`] for a closure over coalition masks.
    pub fn from_fn(n: usize, meta: InstanceMeta, f: impl FnMut(u32) -> f64) -> Result<Self> {
        check_agent_count(n)?;
        let values = (1u32..(1u32 << n)).map(f).collect();
        Self::new(n, values, meta)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn meta(&self) -> InstanceMeta {
        self.meta
    }

    /// The `2^n - 1` stored values, index 1 first.
    pub fn values(&self) -> &[f64] {
        &self.table[1..]
    }

    #[inline]
    pub fn value(&self, c: CoalitionIndex) -> f64 {
        self.table[c.mask() as usize]
    }

    /// Value of a raw mask; the empty mask is worth 0.
    #[inline]
    pub(crate) fn mask_value(&self, mask: u32) -> f64 {
        self.table[mask as usize]
    }

    /// Sum of block values; see [`cs_value`].
    pub fn structure_value(&self, cs: &CoalitionStructure) -> Result<f64> {
        if cs.n() != self.n {
            return Err(CsgError::DimensionMismatch {
                structure: cs.n(),
                instance: self.n,
            });
        }
        Ok(self.blocks_value(cs.blocks()))
    }

    #[inline]
    pub(crate) fn blocks_value(&self, blocks: &[u32]) -> f64 {
        blocks.iter().map(|&b| self.table[b as usize]).sum()
    }
}

/// `v(C) = sum of v(C_i)` over the blocks of `cs`.
pub fn cs_value(cs: &CoalitionStructure, inst: &Instance) -> Result<f64> {
    inst.structure_value(cs)
}

/// An instance shifted so its minimum value is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub instance: Instance,
    /// Amount added to every coalition value, `max(0, -min)`.
    pub shift: f64,
}

impl Normalized {
    /// Converts a structure value on the shifted table back to the raw scale.
    pub fn raw_value(&self, value: f64, block_count: usize) -> f64 {
        value - self.shift * block_count as f64
    }
}

/// Shifts a raw value table up by `-min` when it has negative entries.
pub fn normalize_values(n: usize, mut values: Vec<f64>, meta: InstanceMeta) -> Result<Normalized> {
    if let Some((i, &v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(CsgError::InvalidValue {
            index: i + 1,
            value: v,
        });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let shift = if min < 0.0 { -min } else { 0.0 };
    if shift > 0.0 {
        for v in &mut values {
            // the minimum lands exactly on 0
            *v = (*v + shift).max(0.0);
        }
    }
    Ok(Normalized {
        instance: Instance::new(n, values, meta)?,
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf4() -> Instance {
        Instance::from_fn(4, InstanceMeta::default(), |m| m as f64 * 1.5 + 0.25).unwrap()
    }

    #[test]
    fn worked_value_example() {
        let inst = cf4();
        let cs: CoalitionStructure = "1123".parse().unwrap();
        let v = |i: u32| inst.mask_value(i);
        assert_eq!(cs_value(&cs, &inst).unwrap(), v(12) + v(2) + v(1));
        let single: CoalitionStructure = "1234".parse().unwrap();
        assert_eq!(cs_value(&single, &inst).unwrap(), v(8) + v(4) + v(2) + v(1));
        let grand: CoalitionStructure = "1111".parse().unwrap();
        assert_eq!(cs_value(&grand, &inst).unwrap(), v(15));
    }

    #[test]
    fn dimension_mismatch() {
        let cs: CoalitionStructure = "112".parse().unwrap();
        assert_eq!(
            cs_value(&cs, &cf4()),
            Err(CsgError::DimensionMismatch {
                structure: 3,
                instance: 4
            })
        );
    }

    #[test]
    fn validation() {
        assert!(matches!(
            Instance::new(3, vec![1.0; 6], InstanceMeta::default()),
            Err(CsgError::WrongValueCount {
                expected: 7,
                got: 6
            })
        ));
        assert!(matches!(
            Instance::new(2, vec![1.0, -0.5, 2.0], InstanceMeta::default()),
            Err(CsgError::InvalidValue { index: 2, .. })
        ));
        assert!(Instance::new(2, vec![1.0, f64::NAN, 2.0], InstanceMeta::default()).is_err());
    }

    #[test]
    fn normalize_no_op() {
        let values = vec![0.5, 1.0, 2.0];
        let norm = normalize_values(2, values.clone(), InstanceMeta::default()).unwrap();
        assert_eq!(norm.shift, 0.0);
        assert_eq!(norm.instance.values(), values.as_slice());
    }

    #[test]
    fn normalize_shifts_negative_tables() {
        let norm = normalize_values(2, vec![-2.0, 1.0, 0.5], InstanceMeta::default()).unwrap();
        assert_eq!(norm.shift, 2.0);
        assert_eq!(norm.instance.values(), &[0.0, 3.0, 2.5]);
        let min = norm
            .instance
            .values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, 0.0);
        // {1},{2} on the raw scale is -2 + 1 = -1
        let cs = CoalitionStructure::singletons(2).unwrap();
        let v = cs_value(&cs, &norm.instance).unwrap();
        assert_eq!(norm.raw_value(v, cs.block_count()), -1.0);
    }
}
