package derived

import "unsafe"

type myHdr struct {
	Data uintptr
	Len  int
	Cap  int
}

type notHdr struct {
	Data  uintptr
	Len   int
	Cap   int
	Extra bool
}

func Build(p uintptr, n int) []byte {
	h := myHdr{Data: p, Len: n, Cap: n}
	return *(*[]byte)(unsafe.Pointer(&h))
}

func Other(p uintptr) notHdr {
	return notHdr{Data: p}
}
