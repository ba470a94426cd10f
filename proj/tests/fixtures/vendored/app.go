package vendored

import (
	"fmt"
	"net"

	"example.org/fastbuf"
)

var _ = net.Dial

func Show(b []byte) { fmt.Println(fastbuf.String(b)) }
