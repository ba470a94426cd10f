package alpha

import (
	"unsafe"

	"example.org/fastbuf"
)

func Name(b []byte) string { return fastbuf.String(b) }

func Width() uintptr { return unsafe.Sizeof(b0) }

var b0 byte
