package v1

import (
	"unsafe"

	"k8s.io/apiserver/pkg/apis/audit"
)

func autoConvert(in *PolicyList, out *audit.PolicyList) error {
	// [...]
	out.Items = *(*[]audit.Policy)(unsafe.Pointer(&in.Items))
	return nil
}
