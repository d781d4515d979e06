"""duplexforge: simulation and optimization toolkit for full-duplex mmWave transceivers.

Submodules
----------
link_math        scalar duplexing math and rate regions
arrays           geometry, steering vectors, quantized beam weights, codebooks
channels         user/SI channel generation and the log-normal INR model
fd_link          beamformed full-duplex link metrics
analog_sic       N-tap analog SIC filter fitting
beam_design      per-pair beam selection (exhaustive oracle + alternating search)
codebook_design  SI-aware codebook design under coverage constraints
steer            measurement-driven neighborhood beam selection
scenario         declarative experiment configuration and seeding
cli              reproducible experiment commands
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    analog_sic,
    arrays,
    beam_design,
    channels,
    codebook_design,
    fd_link,
    link_math,
    scenario,
    steer,
)
