"""Search, certify and bound norm-Euclidean cyclic fields of odd prime degree."""

__version__ = "0.1.0"

from .arith import FieldClass, PowerResidueClassifier, conductor_stream, is_prime, make_classifier, primes_in_segment
from .bounds import BoundsEvaluator, constant_C, eval_fXu, eval_g, grh_bound, grh_rhs, uncond_bound, uncond_rhs
from .criterion import SurvivorRecord, SweepSummary, Witness, check_witness, find_witness, sweep, sweep_range
from .cycfield import FieldElement, NumberFieldSpec, minimum_lower_bound, norm
from .heilbronn import (
    HeilbronnCertificate,
    brute_decompose,
    cubic_decompose,
    norm_set_member,
    verify_certificate,
    witness_decomposition,
)
from .orchestrator import SweepJob, run_bounds, run_sweep, run_verify
