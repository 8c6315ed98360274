"""rollerr: how one-step dynamics-model errors compound over rollouts.

Layout:

* ``numerics``  -- seeded RNG, least squares, percentile statistics
* ``kernels``   -- training hot loops (compiled extension or numpy fallback)
* ``systems``   -- synthetic environments, policies, trajectory datasets
* ``models``    -- the model zoo behind one next-state prediction interface
* ``rollout``   -- multi-step composition and normalized per-step error
* ``experiments`` -- sweep presets, CSV/SVG artifacts, the ``rollerr`` CLI
"""

__version__ = "0.1.0"
