//! Complex-parameter grammar for the command line.
//!
//! Accepted forms: `RE`, `RE+IMi` / `RE-IMi`, `r@θrad` (argument in
//! radians), and `r@xpi` (argument in units of π, the form used by the
//! figure captions).

use num_complex::Complex64;

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some((r, arg)) = s.split_once('@') {
        let r: f64 = r
            .parse()
            .map_err(|_| format!("bad modulus in `{s}`"))?;
        let theta = if let Some(x) = arg.strip_suffix("pi") {
            let x: f64 = x.parse().map_err(|_| format!("bad π-multiple in `{s}`"))?;
            x * std::f64::consts::PI
        } else if let Some(x) = arg.strip_suffix("rad") {
            x.parse().map_err(|_| format!("bad radian argument in `{s}`"))?
        } else {
            return Err(format!("argument in `{s}` must end in `pi` or `rad`"));
        };
        return Ok(Complex64::from_polar(r, theta));
    }
    if let Some(body) = s.strip_suffix('i') {
        // RE+IMi or RE-IMi: split at the last sign that is not an exponent
        // sign and not the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let b = bytes[i];
            if (b == b'+' || b == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let i = split.ok_or_else(|| format!("`{s}`: expected RE+IMi"))?;
        let re: f64 = body[..i]
            .parse()
            .map_err(|_| format!("bad real part in `{s}`"))?;
        let im_str = &body[i..];
        let im: f64 = if im_str == "+" || im_str == "-" {
            format!("{im_str}1").parse().unwrap()
        } else {
            im_str.parse().map_err(|_| format!("bad imaginary part in `{s}`"))?
        };
        return Ok(Complex64::new(re, im));
    }
    let re: f64 = s.parse().map_err(|_| format!("`{s}` is not a complex literal"))?;
    Ok(Complex64::new(re, 0.0))
}
