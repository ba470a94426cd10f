package clean

import "unsafe"

var _ = unsafe.Sizeof(0)
