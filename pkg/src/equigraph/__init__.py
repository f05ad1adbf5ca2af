"""Fixed point data and signed multigraphs of torus actions with isolated fixed points."""
