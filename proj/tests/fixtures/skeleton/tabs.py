class Tabbed:
	def m(self):
		return 1

	def n(self,
	      x):
		if x:
			return x
		return None


def after():
    return [
        1,
        2,
    ]
