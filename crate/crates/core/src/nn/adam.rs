use super::net::Params;

#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub step: u64,
    m: Params,
    v: Params,
}

impl Adam {
    pub fn new(params: &Params) -> Self {
        let zeros: Params = params.iter().map(|p| vec![0.0; p.len()]).collect();
        Adam { beta1: 0.9, beta2: 0.999, eps: 1e-8, step: 0, m: zeros.clone(), v: zeros }
    }

    pub fn update(&mut self, params: &mut Params, grads: &Params, lr: f64) {
        self.step += 1;
        let c1 = 1.0 - self.beta1.powi(self.step as i32);
        let c2 = 1.0 - self.beta2.powi(self.step as i32);
        for (((p, g), m), v) in params.iter_mut().zip(grads).zip(&mut self.m).zip(&mut self.v) {
            for i in 0..p.len() {
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g[i];
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g[i] * g[i];
                p[i] -= lr * (m[i] / c1) / ((v[i] / c2).sqrt() + self.eps);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_lr() {
        let mut p = vec![vec![1.0, -2.0, 0.0]];
        let mut opt = Adam::new(&p);
        opt.update(&mut p, &vec![vec![0.5, -3.0, 0.0]], 0.1);
        assert!((p[0][0] - 0.9).abs() < 1e-7);
        assert!((p[0][1] + 1.9).abs() < 1e-7);
        assert_eq!(p[0][2], 0.0);
    }

    #[test]
    fn minimizes_quadratic() {
        let mut p = vec![vec![3.0]];
        let mut opt = Adam::new(&p);
        for _ in 0..2000 {
            let g = vec![vec![2.0 * (p[0][0] - 1.0)]];
            opt.update(&mut p, &g, 0.05);
        }
        assert!((p[0][0] - 1.0).abs() < 1e-3);
    }
}
