//! Parsing of `--orders` values: a comma list (`4,8,12`, `2^5`) or a
//! power-of-two range `2^a..2^b`.

pub fn parse_orders(text: &str) -> Result<Vec<usize>, String> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let (a, b) = (exponent(lo)?, exponent(hi)?);
        if a > b {
            return Err(format!("empty order range {text}"));
        }
        return Ok((a..=b).map(|k| 1usize << k).collect());
    }
    let orders = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            let n = match t.strip_prefix("2^") {
                Some(_) => 1usize << exponent(t)?,
                None => t.parse::<usize>().map_err(|_| format!("bad order '{t}'"))?,
            };
            if n == 0 {
                return Err("orders must be positive".to_string());
            }
            Ok(n)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(orders)
}

fn exponent(t: &str) -> Result<u32, String> {
    let t = t.trim();
    let k = t
        .strip_prefix("2^")
        .ok_or_else(|| format!("range bounds must look like 2^k, got '{t}'"))?
        .parse::<u32>()
        .map_err(|_| format!("bad exponent in '{t}'"))?;
    if k >= usize::BITS - 1 {
        return Err(format!("exponent too large in '{t}'"));
    }
    Ok(k)
}
