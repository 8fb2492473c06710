"""betaink: online handwriting toolkit.

Segments digital ink into Beta-elliptic strokes, encodes them as fuzzy
perceptual codes, and recognizes them with a small recurrent sequence
classifier.  Ships a generative stroke synthesizer (used both as corpus
source and as test oracle), a CLI and a recognition service.
"""

from .ink import InkPoint, InkTrace, PenStroke, parse_ink, serialize_ink, split_pen_strokes
from .preprocess import PreprocessConfig, preprocess
from .beta import BetaProfile, beta, synthesize_trace, SynthStroke
from .fitting import EllipticArc, fit_beta, fit_arc, deviation_angle, fold_angle
from .segmentation import BetaPoint, BetaPoints, ElliptiStroke, SegmentOptions, curvilinear_velocity, segment
from .perceptual import Epc, Bpc, EpcMembership, FuzzyRegions, PerceptualItem, PerceptualSequence
from .perceptual import epc_membership, encode_sequence, compose_bpc, handwriting_equation

__version__ = "0.1.0"
