#![no_main]

use libfuzzer_sys::fuzz_target;
use spdc_oam::parse_pgm;
use spdc_oam::pgm::encode_pgm;

fuzz_target!(|data: &[u8]| {
    let Ok(img) = parse_pgm(data) else {
        return;
    };
    assert_eq!(img.pixels.len(), img.width * img.height);
    assert!(img.pixels.iter().all(|&p| p <= img.maxval));
    if img.maxval == 255 {
        // 8-bit images survive a re-encode unchanged
        let bytes: Vec<u8> = img.pixels.iter().map(|&p| p as u8).collect();
        let again = parse_pgm(&encode_pgm(img.width, img.height, &bytes)).unwrap();
        assert_eq!(again, img);
    }
    if img.width >= 16 && img.height >= 16 {
        let _ = img.to_real_grid(1.0);
    }
});
