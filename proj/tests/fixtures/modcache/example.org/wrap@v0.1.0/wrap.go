package wrap

import "example.org/fastbuf"

func Text(b []byte) string { return fastbuf.String(b) }
