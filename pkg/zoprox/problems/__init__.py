from zoprox.problems.logistic import LogisticSpec, make_logistic, make_nc_logistic
from zoprox.problems.synthetic import make_quadratic, synth_dataset, synth_with_weights
