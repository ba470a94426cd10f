package fastbuf

func Name() string { return "local" }
