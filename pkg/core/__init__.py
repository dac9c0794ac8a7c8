"""Program model, slicers and the per-root analysis pipeline."""
