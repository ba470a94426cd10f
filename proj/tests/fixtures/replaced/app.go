package replaced

import "example.org/fastbuf"

func Name() string { return fastbuf.Name() }
