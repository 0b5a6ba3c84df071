"""RIFF back end: data, tree growth, rule extraction, selection and evaluation."""
