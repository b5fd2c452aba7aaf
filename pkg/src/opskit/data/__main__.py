from opskit.data import regenerate

regenerate()
