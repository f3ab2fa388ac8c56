use crate::error::{Error, Result};
use crate::scenario::CodecCoeffs;

/// CPU cycles to compress or decompress `size_bits` at ratio `ratio`:
/// `xi * size * (scale * ratio^exponent + offset)`.
pub fn codec_cycles(size_bits: f64, ratio: f64, coeffs: &CodecCoeffs, xi: f64) -> Result<f64> {
    if !(ratio > 0.0) {
        return Err(Error::domain(format!(
            "compression ratio must be positive, got {ratio}"
        )));
    }
    if size_bits < 0.0 {
        return Err(Error::domain(format!("negative data size {size_bits}")));
    }
    Ok(xi * size_bits * (coeffs.scale * ratio.powf(coeffs.exponent) + coeffs.offset))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOC: CodecCoeffs = CodecCoeffs::new(1.027e-15, 32.28, 0.3);
    const DEC: CodecCoeffs = CodecCoeffs::new(0.115, -0.9179, 0.046);

    #[test]
    fn zero_data_costs_nothing() {
        assert_eq!(codec_cycles(0.0, 2.5, &LOC, 50.0).unwrap(), 0.0);
    }

    #[test]
    fn device_compression_reference_value() {
        // 50 * 8e5 * (1.027e-15 * 2.3^32.28 + 0.3), evaluated at 50 digits
        let expect = 12_019_507.651_192_844;
        let got = codec_cycles(8e5, 2.3, &LOC, 50.0).unwrap();
        assert!(((got - expect) / expect).abs() < 1e-9, "{got} vs {expect}");
    }

    #[test]
    fn decompression_falls_with_ratio() {
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let z = 2.0 + 0.25 * i as f64;
            let c = codec_cycles(1e6, z, &DEC, 50.0).unwrap();
            assert!(c < prev);
            prev = c;
        }
    }

    #[test]
    fn nonpositive_ratio_is_domain_error() {
        assert!(matches!(codec_cycles(1.0, 0.0, &LOC, 50.0), Err(Error::Domain(_))));
        assert!(codec_cycles(1.0, -1.0, &LOC, 50.0).is_err());
    }
}
