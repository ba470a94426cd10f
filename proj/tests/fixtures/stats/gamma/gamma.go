package gamma

import (
	"example.org/fastbuf"
	"github.com/BurntSushi/toml"
)

func Name(b []byte) string { return fastbuf.String(b) }

func Width() int { return int(toml.Size()) }
