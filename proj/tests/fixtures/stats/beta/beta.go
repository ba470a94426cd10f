package beta

import "example.org/wrap"

func Name(b []byte) string { return wrap.Text(b) }
